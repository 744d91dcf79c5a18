"""K(0, 0) for the weight (1-t)^alpha dt, computed exactly with rationals.

K(0, 0) = sum_{k<q} P_k(0)^2 with P_k orthonormal for the moments
s_d = d! / ((alpha+1) ... (alpha+d+1)).  This Christoffel sum equals
e_0^T G^{-1} e_0 for the q x q Hankel matrix G = (s_{i+j}).  Compared with
q(alpha+q) and with q(alpha+q) C(alpha+q-1, alpha).
"""

import argparse
from fractions import Fraction

import sympy

from polykernel.closedform import gbinom
from polykernel.kernelseries import KernelParams, R_kernel
from polykernel.measures import bergman


def moment(alpha, d):
    out = Fraction(1)
    for k in range(1, d + 2):
        out /= alpha + k
    for k in range(1, d + 1):
        out *= k
    return out


def exact_origin_value(alpha, q):
    g = sympy.Matrix(q, q, lambda i, j: sympy.Rational(moment(alpha, i + j)))
    return Fraction(str(g.inv()[0, 0]))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", default="0,1/2,1,2,3")
    ap.add_argument("--qs", default="1,2,3,4")
    args = ap.parse_args()
    print(f"{'alpha':>6} {'q':>2} {'exact':>10} {'series':>12} {'q(a+q)':>8} {'with binom':>11}")
    for a in args.alphas.split(","):
        alpha = Fraction(a)
        for q in (int(q) for q in args.qs.split(",")):
            exact = exact_origin_value(alpha, q)
            ser = complex(R_kernel(KernelParams(bergman(float(alpha)), q), 0, 0)).real
            simple = q * (alpha + q)
            stated = float(simple) * gbinom(float(alpha) + q - 1, float(alpha))
            print(f"{a:>6} {q:>2d} {str(exact):>10} {ser:>12.8g} {str(simple):>8} {stated:>11.6g}")


if __name__ == "__main__":
    main()
