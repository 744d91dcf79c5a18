"""Closed form vs series over a grid of (measure, alpha, q); prints one row per case."""

import argparse

from polykernel.kernelseries import KernelParams
from polykernel.measures import bergman, fock
from polykernel.verify import compare_methods, disc_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", default="0,0.5,1,2")
    ap.add_argument("--qs", default="1,2,3")
    ap.add_argument("--n", type=int, default=9)
    ap.add_argument("--bergman-radius", type=float, default=0.7)
    ap.add_argument("--fock-radius", type=float, default=2.0)
    args = ap.parse_args()
    alphas = [float(a) for a in args.alphas.split(",")]
    qs = [int(q) for q in args.qs.split(",")]
    print(f"{'measure':>8} {'alpha':>6} {'q':>2} {'cs-rel':>10} {'|K|-rel':>10}  argmax (z, w)")
    for name, make, radius in (("bergman", bergman, args.bergman_radius),
                               ("fock", fock, args.fock_radius)):
        grid = disc_grid(radius, args.n)
        for alpha in alphas:
            for q in qs:
                p = KernelParams(make(alpha), q)
                err, (z, w) = compare_methods(p, grid, grid)
                plain, _ = compare_methods(p, grid, grid, plain=True)
                print(f"{name:>8} {alpha:>6g} {q:>2d} {err:>10.2e} {plain:>10.2e}  "
                      f"({z:.3f}, {w:.3f})")


if __name__ == "__main__":
    main()
