"""Orthonormal polynomials for the shifted radial measures ``x**d dmu(x)``.

The production path factors the moment Gram matrix ``s_{d+i+j}`` after
dividing by ``s_d`` and equilibrating its diagonal; the Hankel-determinant
formulas and an exact rational LDL backend are kept alongside as oracles.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConditioningError, RankError, UnsupportedError
from .measures import (Kind, MeasureSpec, exact_moment, exact_moment_ratio, log_moment, moment,
                       moment_ratio)

COND_THRESHOLD = 1e12


@dataclass(frozen=True, eq=False)
class OrthoBasis:
    """Orthonormal ``P_{d,0..n}`` in the monomial basis.

    ``unit_coeffs`` are the coefficients for the probability measure
    ``x**d dmu / s_d``; the true polynomials are those rows times
    ``exp(-log_scale / 2)`` with ``log_scale = log s_d``.  Keeping the scale
    apart lets the kernel series combine it with ``lambda**d`` in log space.
    """

    d: int
    n: int
    unit_coeffs: np.ndarray
    log_scale: float
    cond_estimate: float

    @property
    def coeffs(self) -> np.ndarray:
        return self.unit_coeffs * math.exp(-0.5 * self.log_scale)

    def eval_unit(self, k, x):
        return np.polynomial.polynomial.polyval(x, self.unit_coeffs[k, : k + 1])

    def eval(self, k, x):
        return self.eval_unit(k, x) * math.exp(-0.5 * self.log_scale)

    def q_unit(self, x, y, n=None):
        """``s_d * Q_{d,n}(x, y)``; n defaults to the full basis."""
        n = self.n if n is None else n
        c = self.unit_coeffs[: n + 1, : n + 1]
        px = np.polynomial.polynomial.polyval(x, c.T)
        py = np.polynomial.polynomial.polyval(y, c.T)
        return np.sum(px * py, axis=0)


def support_size(spec: MeasureSpec, d: int):
    """Number of support points of ``x**d dmu``; None when infinite."""
    if spec.kind is not Kind.ATOMS:
        return None
    if d == 0:
        return len(spec.atoms)
    return sum(1 for t, _ in spec.atoms if t > 0)


def _check_rank(spec, d, n):
    size = support_size(spec, d)
    if size is not None and n > size - 1:
        raise RankError(f"degree {n} needs {n + 1} support points of x^{d} dmu, have {size}")


def unit_gram(spec: MeasureSpec, d: int, n: int) -> np.ndarray:
    """Moment matrix ``s_{d+i+j} / s_d`` for ``0 <= i, j <= n``."""
    ratios = [moment_ratio(spec, d, k) for k in range(2 * n + 1)]
    return np.array([[ratios[i + j] for j in range(n + 1)] for i in range(n + 1)])


@functools.lru_cache(maxsize=8192)
def build_basis(spec: MeasureSpec, d: int, n: int) -> OrthoBasis:
    if d < 0 or n < 0:
        raise ValueError("d and n must be nonnegative")
    _check_rank(spec, d, n)
    gram = unit_gram(spec, d, n)
    scale = 1.0 / np.sqrt(np.diag(gram))
    eq = gram * np.outer(scale, scale)
    cond = float(np.linalg.cond(eq)) if n > 0 else 1.0
    if spec.kind is Kind.ATOMS:
        # x^d dmu piles onto the largest atom as d grows; the Gram matrix is
        # exponentially ill-conditioned but exactly rational.
        return _basis_from_exact(spec, d, n, cond)
    if not math.isfinite(cond) or cond > COND_THRESHOLD:
        raise ConditioningError(f"moment Gram matrix for d={d}, n={n} is not usable", cond)
    try:
        chol = np.linalg.cholesky(eq)
    except np.linalg.LinAlgError:
        raise ConditioningError(f"moment Gram matrix for d={d}, n={n} is not positive definite",
                                cond) from None
    inv = np.linalg.solve(chol, np.eye(n + 1))
    unit = np.tril(inv * scale[np.newaxis, :])
    if n > 0:
        unit = _refine(spec, d, n, unit)
    unit.setflags(write=False)
    return OrthoBasis(d, n, unit, log_moment(spec, d), cond)


def _refine(spec, d, n, unit):
    """One correction step against the exact Gram matrix, when it is rational.

    The float factor is off by about cond * eps; with ``E = C G C^T - I``
    accumulated exactly, ``chol(I + E)^-1 C`` is orthonormal to roughly eps.
    """
    ratios = [exact_moment_ratio(spec, d, k) for k in range(2 * n + 1)]
    if any(r is None for r in ratios):
        return unit
    c = [[Fraction(float(v)) for v in row] for row in unit]
    cg = [[sum((c[a][i] * ratios[i + j] for i in range(a + 1)), Fraction(0))
           for j in range(n + 1)] for a in range(n + 1)]
    err = np.array([[float(sum((cg[a][j] * c[b][j] for j in range(b + 1)), Fraction(0))
                           - (a == b)) for b in range(n + 1)] for a in range(n + 1)])
    fix = np.linalg.cholesky(np.eye(n + 1) + err)
    return np.tril(np.linalg.solve(fix, unit))


def _basis_from_exact(spec, d, n, cond):
    eb = exact_basis(spec, d, n)
    s_d = exact_moment(spec, d)
    unit = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        inv_norm = 1.0 / math.sqrt(eb.norms[k] / s_d)
        unit[k, : k + 1] = [float(c) * inv_norm for c in eb.monic[k]]
    unit.setflags(write=False)
    return OrthoBasis(d, n, unit, log_moment(spec, d), cond)


def eval_P(basis: OrthoBasis, k: int, x):
    if not 0 <= k <= basis.n:
        raise ValueError(f"degree {k} outside basis of degree {basis.n}")
    return basis.eval(k, x)


def eval_Q(spec: MeasureSpec, d: int, n: int, x, y):
    """``Q_{d,n}(x, y) = sum_{k<=n} P_{d,k}(x) P_{d,k}(y)``."""
    b = build_basis(spec, d, n)
    return b.q_unit(x, y) * math.exp(-b.log_scale)


# -- exact rational backend -------------------------------------------------


@dataclass(frozen=True)
class ExactBasis:
    """Monic orthogonal polynomials and their squared norms, exactly."""

    d: int
    monic: tuple  # row k: ascending Fractions of the monic degree-k polynomial
    norms: tuple  # h_k = integral of monic_k**2 x**d dmu

    def eval_monic(self, k, x):
        return sum((c * x**i for i, c in enumerate(self.monic[k])), Fraction(0))

    def q(self, x, y, n=None):
        n = len(self.norms) - 1 if n is None else n
        return sum(self.eval_monic(k, x) * self.eval_monic(k, y) / self.norms[k]
                   for k in range(n + 1))

    def float_coeffs(self) -> np.ndarray:
        """Orthonormal coefficients, rounded once at the end."""
        n = len(self.norms) - 1
        out = np.zeros((n + 1, n + 1))
        for k in range(n + 1):
            inv_norm = 1.0 / math.sqrt(self.norms[k])
            for i, c in enumerate(self.monic[k]):
                out[k, i] = float(c) * inv_norm
        return out


def exact_gram(spec: MeasureSpec, d: int, n: int):
    s = [exact_moment(spec, d + k) for k in range(2 * n + 1)]
    if any(v is None for v in s):
        raise UnsupportedError(f"{spec.label} has no exact moments")
    return [[s[i + j] for j in range(n + 1)] for i in range(n + 1)]


@functools.lru_cache(maxsize=512)
def exact_basis(spec: MeasureSpec, d: int, n: int) -> ExactBasis:
    import sympy

    _check_rank(spec, d, n)
    gram = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row]
                         for row in exact_gram(spec, d, n)])
    lower, diag = gram.LDLdecomposition(hermitian=False)
    monic = lower.inv()
    to_frac = lambda v: Fraction(int(v.p), int(v.q))
    rows = tuple(tuple(to_frac(monic[k, i]) for i in range(k + 1)) for k in range(n + 1))
    norms = tuple(to_frac(diag[k, k]) for k in range(n + 1))
    return ExactBasis(d, rows, norms)


# -- Hankel determinants ----------------------------------------------------


def hankel_matrix(spec: MeasureSpec, d: int, n: int) -> np.ndarray:
    s = [moment(spec, d + k) for k in range(2 * n + 1)]
    return np.array([[s[i + j] for j in range(n + 1)] for i in range(n + 1)])


def hankel_det(spec: MeasureSpec, d: int, n: int) -> float:
    """``D_{d,n}``; ``D_{d,-1} = 1`` by convention."""
    if n < 0:
        return 1.0
    return float(np.linalg.det(hankel_matrix(spec, d, n)))


def hankel_poly(spec: MeasureSpec, d: int, n: int) -> np.ndarray:
    """Ascending coefficients of ``D_{d,n}(x)`` (last Hankel row replaced by powers of x)."""
    if n == 0:
        return np.array([1.0])
    h = hankel_matrix(spec, d, n)[:n]
    out = np.empty(n + 1)
    # cofactor expansion along the row (1, x, ..., x^n)
    for j in range(n + 1):
        minor = np.delete(h, j, axis=1)
        out[j] = (-1) ** (n + j) * np.linalg.det(minor)
    return out


def determinant_P(spec: MeasureSpec, d: int, n: int) -> np.ndarray:
    """Coefficients of ``D_{d,n}(x) / sqrt(D_{d,n-1} D_{d,n})``."""
    return hankel_poly(spec, d, n) / math.sqrt(hankel_det(spec, d, n - 1) * hankel_det(spec, d, n))


def _heine(spec, d, n):
    """Heine multi-sums for ``D_{d,n}`` and the coefficients of ``D_{d,n}(x)``."""
    pts = [(t, w * t**d) for t, w in spec.atoms if d == 0 or t > 0]

    det = 0.0
    for tup in itertools.product(pts, repeat=n + 1):
        xs = [p[0] for p in tup]
        weight = math.prod(p[1] for p in tup)
        vander = math.prod((xs[j] - xs[k]) ** 2 for j in range(n + 1) for k in range(j + 1, n + 1))
        det += weight * vander
    det /= math.factorial(n + 1)

    poly = np.zeros(n + 1)
    for tup in itertools.product(pts, repeat=n):
        xs = [p[0] for p in tup]
        weight = math.prod(p[1] for p in tup)
        vander = math.prod((xs[j] - xs[k]) ** 2 for j in range(n) for k in range(j + 1, n))
        poly += weight * vander * np.atleast_1d(np.poly(xs))[::-1]
    poly /= math.factorial(n)
    return det, poly


def heine_check(spec: MeasureSpec, d: int, n: int) -> float:
    """Max relative gap between moment determinants and their Heine multi-sums."""
    if spec.kind is not Kind.ATOMS:
        raise UnsupportedError("the Heine check needs a finitely supported measure")
    det_h, poly_h = _heine(spec, d, n)
    det_m = hankel_det(spec, d, n)
    poly_m = hankel_poly(spec, d, n)
    gaps = [abs(det_m - det_h) / max(abs(det_h), 1e-300)]
    scale = max(np.max(np.abs(poly_h)), 1e-300)
    gaps.append(float(np.max(np.abs(poly_m - poly_h))) / scale)
    return max(gaps)


# -- three-term recurrence (Jacobi matrix) -----------------------------------


def recurrence(spec: MeasureSpec, n_nodes: int):
    """Diagonal ``a_0..a_{N-1}`` and squared off-diagonal ``b_1..b_{N-1}``.

    From monic polynomials ``pi_k`` with squared norms ``h_k``:
    ``a_k = c_{k,k-1} - c_{k+1,k}`` (sub-leading coefficients) and
    ``b_k = h_k / h_{k-1}``.  Exact rationals are used when available.
    """
    try:
        eb = exact_basis(spec, 0, n_nodes)
        sub = [eb.monic[k][k - 1] if k else Fraction(0) for k in range(n_nodes + 1)]
        a = [float(sub[k] - sub[k + 1]) for k in range(n_nodes)]
        b = [float(eb.norms[k] / eb.norms[k - 1]) for k in range(1, n_nodes)]
        return np.array(a), np.array(b)
    except UnsupportedError:
        pass
    basis = build_basis(spec, 0, n_nodes)
    c = basis.unit_coeffs
    lead = np.diag(c)
    monic = c / lead[:, np.newaxis]
    h = 1.0 / lead**2
    sub = [monic[k, k - 1] if k else 0.0 for k in range(n_nodes + 1)]
    a = [sub[k] - sub[k + 1] for k in range(n_nodes)]
    b = [h[k] / h[k - 1] for k in range(1, n_nodes)]
    return np.array(a), np.array(b)
