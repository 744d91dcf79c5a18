"""How far the Laguerre closed form is from the Fock-type kernel when alpha != 0.

For q = 1 the series has a closed form of its own,
``Gamma(alpha+1) lam^(-alpha) e^lam P(alpha, lam)`` with P the regularised
lower incomplete gamma function, which is printed alongside as a check on the
series.
"""

import argparse

import numpy as np
from scipy.special import gamma, gammainc

from polykernel.closedform import fock_kernel
from polykernel.kernelseries import KernelParams, R_kernel
from polykernel.measures import fock


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", default="0,0.5,1,2.5")
    ap.add_argument("--qs", default="1,2,3")
    ap.add_argument("--points", default="0.3,1.0,2.0", help="real |z| = |w| values")
    args = ap.parse_args()
    pts = [float(v) for v in args.points.split(",")]
    print(f"{'alpha':>6} {'q':>2} {'r':>5} {'series':>14} {'closed':>14} {'ratio':>8} "
          f"{'q=1 check':>10}")
    for alpha in (float(a) for a in args.alphas.split(",")):
        for q in (int(q) for q in args.qs.split(",")):
            p = KernelParams(fock(alpha), q)
            for r in pts:
                ser = complex(R_kernel(p, r, r)).real
                clo = complex(fock_kernel(alpha, q, r, r)).real
                check = ""
                if q == 1:
                    lam = r * r
                    ref = gamma(alpha + 1) * lam ** -alpha * np.exp(lam) * gammainc(alpha, lam) \
                        if alpha > 0 else np.exp(lam)
                    check = f"{abs(ser - ref) / ref:10.1e}"
                print(f"{alpha:>6g} {q:>2d} {r:>5g} {ser:>14.8g} {clo:>14.8g} "
                      f"{clo / ser:>8.4f} {check:>10}")


if __name__ == "__main__":
    main()
