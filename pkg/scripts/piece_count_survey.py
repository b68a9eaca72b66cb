"""Affine pieces along random segments for random nets versus the piece bound.

For each hidden depth, random Gaussian nets are traced exactly along random
segments; the ratio of the observed count to (P/H)^H shows how loose the
bound is, and the sawtooth nets show how deep nets reach 2^(n+1) pieces with
few parameters.
"""

import csv
import sys
from dataclasses import dataclass

import numpy as np

from relucalc import Network, metrics
from relucalc.analysis import count_pieces, exact_line_trace, piece_bound
from relucalc.constructors import sawtooth_net

from _config import parse_config


@dataclass
class Config:
    depths: tuple = (1, 2, 3, 4)
    widths: tuple = (4, 16, 64)
    nets_per_cell: int = 20
    input_dim: int = 3
    segment_length: float = 20.0
    sawtooth_levels: int = 12
    seed: int = 0
    out: str = "piece_count_survey.csv"


def main(argv=None):
    cfg = parse_config(Config, argv=argv)
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for H in cfg.depths:
        for w in cfg.widths:
            counts, bound = [], 0.0
            for _ in range(cfg.nets_per_cell):
                dims = [cfg.input_dim] + [w] * H + [1]
                net = Network([(rng.normal(size=(dims[k], dims[k - 1])), rng.normal(size=dims[k]))
                               for k in range(1, len(dims))])
                p = rng.uniform(-5, 5, cfg.input_dim)
                v = rng.normal(size=cfg.input_dim)
                q = p + cfg.segment_length * v / np.linalg.norm(v)
                counts.append(count_pieces(exact_line_trace(net, p, q)))
                m = metrics(net)
                bound = piece_bound(m.param_count, m.hidden_length)
            rows.append(dict(family="random", hidden=H, width=w, mean_pieces=float(np.mean(counts)),
                             max_pieces=max(counts), piece_bound=bound))
            print(rows[-1], flush=True)
    for n in range(cfg.sawtooth_levels + 1):
        net = sawtooth_net(1.0, n)
        m = metrics(net)
        k = count_pieces(exact_line_trace(net, [0.0], [1.0]))
        rows.append(dict(family="sawtooth", hidden=m.hidden_length, width=4, mean_pieces=float(k),
                         max_pieces=k, piece_bound=piece_bound(m.param_count, m.hidden_length)))
        print(rows[-1], flush=True)
    with open(cfg.out, "w", newline="") as fh:
        wr = csv.DictWriter(fh, fieldnames=list(rows[0]))
        wr.writeheader()
        wr.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
