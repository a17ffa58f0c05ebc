"""Per-route gain of K simultaneous routes on a 16x16 surface.

Redirective routes on disjoint beam ports keep their full gain; reflective
phase profiles combined by phasor sum lose about a factor K.
"""

import argparse

import numpy as np

from risscatter import routing
from risscatter.array_model import ArrayGeometry, CoupledArray


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-side", type=int, default=16)
    ap.add_argument("--K", type=int, nargs="+", default=[1, 2, 4, 8])
    ap.add_argument("--draws", type=int, default=200)
    ap.add_argument("--model", choices=("exact", "naive"), default="exact")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    c = CoupledArray.from_geometry(ArrayGeometry(args.n_side, 0.5))
    rng = np.random.default_rng(args.seed)
    print(f"{'K':>3} {'redirective':>12} {'reflective':>11} {'reflective*K':>13}")
    for K in args.K:
        red = np.mean(routing.redirective_gains(c, K, rng, args.model))
        refl = routing.reflective_gains(c, K, args.draws, rng, args.model).mean()
        print(f"{K:3d} {red:12.6f} {refl:11.4f} {refl * K:13.3f}")


if __name__ == "__main__":
    main()
