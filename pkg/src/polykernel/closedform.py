"""Closed-form polyanalytic Bergman and Fock kernels and their special functions.

Conventions (matching :mod:`polykernel.measures`):

* Bergman: planar weight ``(1 - |z|^2)^alpha dA/pi`` on the unit disc.
* Fock: planar weight ``|z|^(2 alpha) exp(-|z|^2) dA / (pi Gamma(alpha + 1))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import binom, gammaln

from .errors import DomainError, ParameterError


def gbinom(a, b):
    """Generalised binomial ``Gamma(a+1) / (Gamma(b+1) Gamma(a-b+1))`` for real a, b."""
    out = float(binom(a, b))
    if not math.isfinite(out):
        raise ParameterError(f"binomial ({a} choose {b}) is not finite")
    return out


# -- Jacobi ------------------------------------------------------------------


@dataclass(frozen=True)
class JacobiParams:
    a: float
    b: float
    n: int

    def __post_init__(self):
        if self.a <= -1 or self.b <= -1:
            raise ParameterError("Jacobi parameters must be > -1")
        if self.n < 0:
            raise ParameterError("degree must be nonnegative")


def jacobi_shifted(p: JacobiParams, x):
    """``P_n^{(a,b)}(1 - 2x)`` from its power series in x.

    P_n^{(a,b)}(1-2x) = Gamma(n+a+1) / (n! Gamma(n+a+b+1))
                        * sum_j (-1)^j C(n,j) Gamma(n+j+a+b+1)/Gamma(j+a+1) x^j
    """
    a, b, n = p.a, p.b, p.n
    x = np.asarray(x, dtype=float)
    # c_0 = C(n+a, n) from log-Gamma; later coefficients by their exact ratios
    coef = [math.exp(gammaln(n + a + 1) - gammaln(n + 1) - gammaln(a + 1))]
    for j in range(n):
        coef.append(-coef[-1] * (n - j) * (n + j + a + b + 1) / ((j + 1) * (j + a + 1)))
    return np.polynomial.polynomial.polyval(x, coef)


def jacobi_eval(p: JacobiParams, x):
    """Alias of :func:`jacobi_shifted`: the argument is x, the polynomial sees ``1 - 2x``."""
    return jacobi_shifted(p, x)


def jacobi_norm(a: float, d: float, n: int) -> float:
    """``int_0^1 P_n^{(a,d)}(2x-1)^2 x^d (1-x)^a dx``.

    Equals ``Gamma(a+n+1) Gamma(d+n+1) / (n! Gamma(a+d+n+1) (a+d+2n+1))``; the
    ``n!`` matters from n = 2 on.
    """
    return math.exp(math.lgamma(a + n + 1) + math.lgamma(d + n + 1) - math.lgamma(n + 1)
                    - math.lgamma(a + d + n + 1)) / (a + d + 2 * n + 1)


# -- Laguerre ----------------------------------------------------------------


@dataclass(frozen=True)
class LaguerreParams:
    beta: float
    n: int

    def __post_init__(self):
        if self.beta <= -1:
            raise ParameterError("Laguerre parameter must be > -1")
        if self.n < 0:
            raise ParameterError("degree must be nonnegative")


def laguerre(n: int, beta: float, x):
    """``L_n^beta(x)`` by the three-term recurrence in n."""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 + beta - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + beta - x) * cur - (k + beta) * prev) / (k + 1)
    return cur


def laguerre_eval(p: LaguerreParams, x):
    return laguerre(p.n, p.beta, x)


def laguerre_explicit(n: int, beta: float, x):
    """``sum_r (-1)^r C(n+beta, n-r) x^r / r!``; an oracle for small n."""
    x = np.asarray(x, dtype=float)
    return sum((-1) ** r * gbinom(n + beta, n - r) * x**r / math.factorial(r)
               for r in range(n + 1))


def bailey_identity_check(beta: float, n: int, x: float, y: float) -> float:
    """Residual of Bailey's product formula for ``L_n^beta(x) L_n^beta(y)``."""
    lhs = float(laguerre(n, beta, x) * laguerre(n, beta, y))
    # Gamma(beta+n+1) / (n! (n-l)! Gamma(beta+n+1-l)), kept in one log so n = 0 is exact
    coef = lambda l: math.exp(math.lgamma(beta + n + 1) - math.lgamma(n + 1)
                              - math.lgamma(n - l + 1) - math.lgamma(beta + n + 1 - l))
    rhs = math.fsum(coef(l) * (x * y) ** (n - l) * float(laguerre(l, beta + 2 * n - 2 * l, x + y))
                    for l in range(n + 1))
    return abs(lhs - rhs)


def laguerre_shift_check(beta: float, n: int, x: float, y: float, kind: int = 1,
                         terms: int = 80) -> float:
    """Residual of a shift identity for ``L_n^beta(x - y)``.

    kind=1: ``sum_{r<=n} y^r/r! L_{n-r}^{beta+r}(x)`` (finite);
    kind=2: ``exp(-y) sum_{r<terms} y^r/r! L_n^{beta+r}(x)`` (truncated).
    """
    lhs = float(laguerre(n, beta, x - y))
    if kind == 1:
        rhs = math.fsum(y**r / math.factorial(r) * float(laguerre(n - r, beta + r, x))
                        for r in range(n + 1))
    elif kind == 2:
        rhs = math.exp(-y) * math.fsum(
            y**r / math.factorial(r) * float(laguerre(n, beta + r, x)) for r in range(terms))
    else:
        raise ValueError("kind must be 1 or 2")
    return abs(lhs - rhs)


# -- disc automorphisms ------------------------------------------------------


@dataclass(frozen=True)
class MobiusMap:
    """Disc automorphism ``z -> (z - w) / (1 - z conj(w))``; its inverse is ``MobiusMap(-w)``."""

    w: complex

    def __post_init__(self):
        if not abs(self.w) < 1:
            raise ParameterError("Mobius centre must lie in the open unit disc")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return (z - self.w) / (1 - z * np.conj(self.w))

    def inverse(self) -> "MobiusMap":
        return MobiusMap(-self.w)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        return (1 - abs(self.w) ** 2) / (1 - z * np.conj(self.w)) ** 2

    def sqrt_derivative(self, z):
        """Branch of ``sqrt(phi'(z))`` equal to ``sqrt(1-|w|^2) / (1 - z conj(w))``."""
        z = np.asarray(z, dtype=complex)
        return math.sqrt(1 - abs(self.w) ** 2) / (1 - z * np.conj(self.w))


def mobius_apply(m: MobiusMap, z):
    return m(z)


def mobius_derivative(m: MobiusMap, z):
    return m.derivative(z)


# -- kernels -----------------------------------------------------------------


def _check_disc(*pts):
    for p in pts:
        if np.any(np.abs(p) >= 1):
            raise DomainError("Bergman kernel arguments must lie in the open unit disc")


def _bergman_sum(alpha, q, z, w):
    """``(1 - conj(z) w)^(q-1) / (1 - z conj(w))^(alpha+q+1) * sum_j c_j rho^j``."""
    zw = z * np.conj(w)
    rho = np.abs(z - w) ** 2 / np.abs(1 - zw) ** 2
    poly = sum((-1) ** j * math.comb(q - 1, j) * gbinom(alpha + q + j, alpha + q - 1) * rho**j
               for j in range(q))
    # principal power is safe: Re(1 - z conj(w)) > 0 on the bidisc
    return (1 - np.conj(zw)) ** (q - 1) / (1 - zw) ** (alpha + q + 1) * poly


def bergman_kernel(alpha: float, q: int, z, w):
    """Weighted polyanalytic Bergman kernel of the unit disc.

    q * (1 - conj(z) w)^(q-1) / (1 - z conj(w))^(alpha+q+1)
      * sum_{j<q} (-1)^j C(q-1, j) C(alpha+q+j, alpha+q-1) |phi_w(z)|^(2j)

    The leading constant is ``q``: with it the diagonal at the origin is
    ``q (alpha + q)``, the value the orthonormal expansion gives.
    """
    if alpha <= -1:
        raise ParameterError("alpha must be > -1")
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    _check_disc(z, w)
    return q * _bergman_sum(alpha, q, z, w)


def bergman_kernel_binomial_variant(alpha: float, q: int, z, w):
    """The same formula with the extra factor ``C(alpha+q-1, alpha)`` in front.

    Kept for comparison reports only; it disagrees with the kernel of the space
    by exactly that factor whenever alpha != 0 and q >= 2.
    """
    return gbinom(alpha + q - 1, alpha) * bergman_kernel(alpha, q, z, w)


def fock_kernel(alpha: float, q: int, z, w):
    """``exp(z conj(w)) L_{q-1}^{alpha+1}(|z - w|^2)``.

    Equals the reproducing kernel only for alpha = 0; for other alpha the
    series kernel differs and the discrepancy is reported, not asserted.
    """
    if alpha <= -1:
        raise ParameterError("alpha must be > -1")
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return np.exp(z * np.conj(w)) * laguerre(q - 1, alpha + 1, np.abs(z - w) ** 2)


def bergman_product_kernel(alpha, q, z, w):
    return math.prod(complex(bergman_kernel(alpha, q, a, b)) for a, b in zip(z, w))


def fock_product_kernel(alpha, q, z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    lag = math.prod(float(laguerre(q - 1, alpha + 1, abs(a - b) ** 2)) for a, b in zip(z, w))
    return np.exp(np.sum(z * np.conj(w))) * lag


def covariance_residual(alpha: float, q: int, m: MobiusMap, z, xi,
                        kernel=bergman_kernel) -> float:
    """Relative residual of the Mobius transformation rule for the Bergman kernel.

    K(z, xi) = (phi'(z) conj(phi'(xi)))^((alpha+q+1)/2)
               / (conj(phi'(z)) phi'(xi))^((q-1)/2) * K(phi(z), phi(xi))

    Half-integer powers use ``sqrt(phi')`` from :meth:`MobiusMap.sqrt_derivative`,
    which is positive at ``z = xi = w``.
    """
    z = complex(z)
    xi = complex(xi)
    rz, rxi = complex(m.sqrt_derivative(z)), complex(m.sqrt_derivative(xi))
    # (rz conj(rxi))^(alpha+q+1): both factors have positive real part
    num = (rz * np.conj(rxi)) ** (alpha + q + 1)
    den = (np.conj(rz) * rxi) ** (q - 1)
    lhs = complex(kernel(alpha, q, z, xi))
    rhs = num / den * complex(kernel(alpha, q, m(z), m(xi)))
    return abs(lhs - rhs) / abs(lhs)
