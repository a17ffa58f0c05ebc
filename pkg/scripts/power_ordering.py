"""Monte-Carlo of exact versus naive scattered power for random passive phased loads.

Reports, per array size, how often the naive model radiates more than the
exact model and how often the exact model exceeds the impinging power.
"""

import argparse

import numpy as np

from risscatter.array_model import ArrayGeometry, CoupledArray
from risscatter.grid import AngularGrid
from risscatter.scattering import Model, random_phased_load, random_waves, scatter


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 8])
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    grid = AngularGrid.gauss_legendre()
    for n in args.sizes:
        c = CoupledArray.from_geometry(ArrayGeometry(n, 0.5))
        rng = np.random.default_rng([args.seed, n])
        naive_over = exact_over = 0
        ratio = []
        for _ in range(args.trials):
            load = random_phased_load(c.n_elements, rng)
            waves = random_waves(grid, rng, 3)
            pe = scatter(c, load, waves, grid, Model.EXACT).power()
            pn = scatter(c, load, waves, grid, Model.NAIVE).power()
            naive_over += pn > pe + 1e-9
            exact_over += pe > waves.impinging_power() + 1e-9
            ratio.append(pn / pe)
        print(f"n_side={n:2d}: naive>exact {naive_over / args.trials:6.1%}, exact>impinging "
              f"{exact_over / args.trials:6.1%}, median naive/exact {np.median(ratio):.3f}")


if __name__ == "__main__":
    main()
