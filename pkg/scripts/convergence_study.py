"""Spread of the empirical upper estimate for uniform p across seeds and H.

Usage: python scripts/convergence_study.py [--depth 3000] [--H 2 5 10 20 50]
"""

import argparse

import numpy as np

from moran_dim import UniformP, estimate_dimension, find_crossing, generate

SEEDS = (1729, 1, 2, 3, 4, 5, 6, 7)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--depth", type=int, default=3000)
    parser.add_argument("--H", type=float, nargs="+", default=[2.0, 5.0, 10.0, 20.0, 50.0])
    parser.add_argument("--a", type=float, default=0.25)
    parser.add_argument("--b", type=float, default=0.5)
    args = parser.parse_args()

    dist = UniformP(args.a, args.b)
    print(f"theory upper={find_crossing(dist).alpha:.6f}  lower={find_crossing(dist, 'lower').alpha:.6f}")
    reals = [generate(dist, args.depth, s) for s in SEEDS]
    print("H     regime   " + " ".join(f"{s:>7d}" for s in SEEDS))
    for H in args.H:
        for regime in ("large_phi_upper", "large_phi_lower"):
            vals = np.array([estimate_dimension(r, regime, H).value for r in reals])
            print(f"{H:<5g} {regime[10:]:<8s} " + " ".join(f"{v:7.3f}" for v in vals))


if __name__ == "__main__":
    main()
