"""Product-tree error with the printed versus the corrected stage precisions.

The printed precision formula leaves out the growth of the stage inputs, so
for radii well above 1 the tree overshoots its error target.  This script
builds both trees and measures the worst error over random points and box
corners.
"""

import sys
from dataclasses import dataclass

import numpy as np

from relucalc import compose_chain, identity_net, realize
from relucalc.analysis import box_corners
from relucalc.constructors import (
    pairwise_product_net, printed_tree_stage_precisions, tree_stage_precisions,
)

from _config import parse_config


@dataclass
class Config:
    levels: tuple = (1, 2, 3)
    radii: tuple = (1.5, 2.0, 4.0, 7.0)
    eps: float = 0.125
    samples: int = 100_000
    seed: int = 0


def tree(d, R, Ns):
    f = pairwise_product_net(2 ** (d - 1), Ns[0], R)
    for i in range(2, d + 1):
        h = pairwise_product_net(2 ** (d - i), Ns[i - 1], R ** (2 ** (i - 1)))
        f = compose_chain(h, identity_net(2 ** (d - i + 1)), f)
    return f


def worst_error(net, d, R, samples, rng):
    n = 2 ** d
    X = np.vstack([rng.uniform(-R, R, (samples, n)), box_corners(n, -R, R)])
    return float(np.max(np.abs(realize(net, X)[:, 0] - X.prod(axis=1))))


def main(argv=None):
    cfg = parse_config(Config, argv=argv)
    rng = np.random.default_rng(cfg.seed)
    print("levels  R      printed N_i        error      corrected N_i      error")
    for d in cfg.levels:
        for R in cfg.radii:
            Np = printed_tree_stage_precisions(d, cfg.eps, R)
            Nc = tree_stage_precisions(d, cfg.eps, R)
            ep = worst_error(tree(d, R, Np), d, R, cfg.samples, rng)
            ec = worst_error(tree(d, R, Nc), d, R, cfg.samples, rng)
            flag = "  <- misses eps" if ep > cfg.eps else ""
            print(f"{d:6d}  {R:<5g}  {str(Np):17s}  {ep:9.3g}  {str(Nc):17s}  {ec:9.3g}{flag}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
