"""Parameter counts of the constructions as d and eps vary.

Writes one CSV row per (construction, d, eps) with the measured parameter
count, length and size next to the closed-form claims, so the polynomial
growth in d and 1/eps can be plotted or fitted.
"""

import csv
import sys
from dataclasses import dataclass

import numpy as np

from relucalc.constructors import TargetSpec, build

from _config import parse_config


@dataclass
class Config:
    dims: tuple = (2, 3, 4, 6, 8)
    eps_values: tuple = (0.5, 0.25, 0.125)
    a: float = 0.0
    b: float = 7.0
    out: str = "parameter_growth.csv"


def main(argv=None):
    cfg = parse_config(Config, argv=argv)
    rows = []
    for d in cfg.dims:
        for eps in cfg.eps_values:
            runs = [
                ("dprod", dict(d=d, eps=min(eps, 0.99), R=max(2.0, abs(cfg.a), abs(cfg.b)))),
                ("sin_product", dict(spec=TargetSpec("sin_product", d, cfg.a, cfg.b), eps=eps)),
                ("sin_sum", dict(spec=TargetSpec("sin_sum", d, cfg.a, cfg.b), eps=eps)),
            ]
            for kind, params in runs:
                net, rep = build(kind, **params)
                rows.append(dict(construction=kind, d=d, eps=eps, params=rep.measured_param,
                                 param_bound=rep.claimed_param_bound, length=rep.measured_length,
                                 length_bound=rep.claimed_length_bound, size=rep.measured_size,
                                 all_bounds_pass=rep.passed))
                print(rows[-1], flush=True)
    with open(cfg.out, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    # log-log slope of parameters against d for each construction at the smallest eps
    eps0 = min(cfg.eps_values)
    for kind in ("dprod", "sin_product", "sin_sum"):
        sel = [r for r in rows if r["construction"] == kind and r["eps"] == eps0]
        if len(sel) > 1:
            slope = np.polyfit(np.log([r["d"] for r in sel]), np.log([r["params"] for r in sel]), 1)[0]
            print(f"{kind}: parameters grow like d^{slope:.2f} at eps={eps0}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
