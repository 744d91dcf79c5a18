"""Polyanalytic reproducing kernels as series over shifted orthonormal polynomials.

For a radial profile ``mu`` and order ``q`` the kernel of the q-analytic
subspace of ``L^2(nu)`` is ``R(z, w) = F(z conj(w), |z|^2, |w|^2)`` with

    F(lam, x, y) = sum_{d>=0} lam^d Q_{d,q-1}(x, y)
                   + sum_{d=1}^{q-1} conj(lam)^d Q_{d,q-1-d}(x, y).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParameterError, TruncationWarning
from .measures import Kind, MeasureSpec, positive_atom_count, support_radius
from .orthopoly import build_basis


@dataclass(frozen=True)
class TruncationPolicy:
    """Stop once ``|term| < rel_tol * |partial|`` for ``consecutive_small`` terms."""

    max_terms: int = 512
    rel_tol: float = 1e-12
    consecutive_small: int = 5

    def __post_init__(self):
        if self.rel_tol <= 0:
            raise ParameterError("rel_tol must be positive")
        if self.max_terms < 1 or self.consecutive_small < 1:
            raise ParameterError("max_terms and consecutive_small must be >= 1")


@dataclass(frozen=True)
class KernelParams:
    spec: MeasureSpec
    q: int = 1
    trunc: TruncationPolicy = field(default_factory=TruncationPolicy)

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 1:
            raise ParameterError(f"order q must be a positive integer, got {self.q!r}")
        if self.trunc.max_terms < self.q:
            raise ParameterError("max_terms must be at least q")
        if self.spec.kind is Kind.ATOMS and positive_atom_count(self.spec) < self.q:
            raise ParameterError(
                f"order q={self.q} needs at least {self.q} strictly positive atoms")


@dataclass
class SeriesResult:
    value: complex | np.ndarray
    terms_used: int | np.ndarray
    truncated: bool | np.ndarray


def _scaled_powers(lam, d, log_scale):
    """``lam**d / s_d`` evaluated as ``exp(d log|lam| - log s_d + i d arg lam)``."""
    if d == 0:
        return np.full(lam.shape, math.exp(-log_scale), dtype=complex)
    with np.errstate(divide="ignore"):
        logmod = d * np.log(np.abs(lam)) - log_scale
    return np.exp(logmod + 1j * d * np.angle(lam))


def series(params: KernelParams, lam, x, y) -> SeriesResult:
    """Sum ``F(lam, x, y)`` elementwise under the truncation policy."""
    lam, x, y = np.broadcast_arrays(np.asarray(lam, dtype=complex),
                                    np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    scalar = lam.ndim == 0
    shape = lam.shape
    lam, x, y = (np.atleast_1d(a).ravel() for a in (lam, x, y))

    lam_radius = support_radius(params.spec).lambda_radius
    if np.any(np.abs(lam) >= lam_radius):
        raise DomainError(f"|lambda| must be < {lam_radius:g}")
    if np.any(x < 0) or np.any(y < 0):
        raise DomainError("x and y must be nonnegative")

    q = params.q
    pol = params.trunc
    spec = params.spec

    total = np.zeros(lam.shape, dtype=complex)
    for d in range(1, q):
        b = build_basis(spec, d, q - 1 - d)
        total += _scaled_powers(np.conj(lam), d, b.log_scale) * b.q_unit(x, y)

    small = np.zeros(lam.shape, dtype=int)
    used = np.zeros(lam.shape, dtype=int)
    active = np.ones(lam.shape, dtype=bool)
    d = 0
    while active.any() and d < pol.max_terms:
        b = build_basis(spec, d, q - 1)
        idx = np.nonzero(active)[0]
        term = _scaled_powers(lam[idx], d, b.log_scale) * b.q_unit(x[idx], y[idx])
        total[idx] += term
        used[idx] = d + 1
        if not np.all(np.isfinite(total[idx])):
            raise DomainError("kernel series diverged (non-finite partial sum)")
        is_small = np.abs(term) <= pol.rel_tol * np.abs(total[idx])
        small[idx] = np.where(is_small, small[idx] + 1, 0)
        active[idx] = small[idx] < pol.consecutive_small
        d += 1

    truncated = active.copy()
    if truncated.any():
        warnings.warn(f"kernel series hit max_terms={pol.max_terms} at {int(truncated.sum())} "
                      "point(s) before converging", TruncationWarning, stacklevel=2)
    if scalar:
        return SeriesResult(complex(total[0]), int(used[0]), bool(truncated[0]))
    return SeriesResult(total.reshape(shape), used.reshape(shape), truncated.reshape(shape))


def convergence_lambda_radius(params: KernelParams) -> float:
    """Radius in ``lambda`` inside which the series converges for every ``x, y``.

    This is ``R_s**2`` except for finitely many atoms with ``q >= 2``: there
    ``Q_{d,q-1}`` grows like ``t_(q)**-d`` with ``t_(q)`` the q-th largest
    positive atom, so only ``|lambda| < t_(q)`` is safe at generic ``x, y``.
    """
    spec = params.spec
    if spec.kind is Kind.ATOMS:
        ts = sorted((t for t, _ in spec.atoms if t > 0), reverse=True)
        return ts[params.q - 1]
    return support_radius(spec).lambda_radius


def F_qs(params: KernelParams, lam, x, y):
    return series(params, lam, x, y).value


def kernel_series(params: KernelParams, z, w) -> SeriesResult:
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return series(params, z * np.conj(w), np.abs(z) ** 2, np.abs(w) ** 2)


def R_kernel(params: KernelParams, z, w):
    """Reproducing kernel ``R(z, w) = F(z conj(w), |z|^2, |w|^2)``.

    Only ``|z conj(w)| < R_s^2`` is enforced, so one argument may sit on the
    boundary circle (as quadrature nodes of an atomic measure do).
    """
    return kernel_series(params, z, w).value


def H_basis(params: KernelParams, m: int, n: int, z):
    """Orthonormal element ``H_{m,n}`` of the q-analytic space.

    With ``z = r xi`` the definition ``r^|m-n| xi^m conj(xi)^n P_{|m-n|, m^n}(r^2)``
    equals ``z^(m-n) P(|z|^2)`` for ``m >= n`` and ``conj(z)^(n-m) P(|z|^2)``
    otherwise, which is also the continuous value at the origin.
    """
    if not 0 <= n <= params.q - 1:
        raise IndexError(f"n={n} must lie in 0..q-1={params.q - 1}")
    if m < 0:
        raise IndexError("m must be nonnegative")
    z = np.asarray(z, dtype=complex)
    d, k = abs(m - n), min(m, n)
    poly = build_basis(params.spec, d, k).eval(k, np.abs(z) ** 2)
    power = z**d if m >= n else np.conj(z) ** d
    return power * poly


def H_expansion(params: KernelParams, z, w, M: int):
    """``sum_{n<q} sum_{m<=M} H_{m,n}(z) conj(H_{m,n}(w))``."""
    total = 0j
    for n in range(params.q):
        for m in range(M + 1):
            total = total + H_basis(params, m, n, z) * np.conj(H_basis(params, m, n, w))
    return total


def kernel_expansion_check(params: KernelParams, z, w, M: int) -> float:
    return float(np.max(np.abs(H_expansion(params, z, w, M) - R_kernel(params, z, w))))


def product_kernel(param_list, z, w):
    """Kernel of the product measure on ``C^p``: the product of 1-D kernels."""
    if not (len(param_list) == len(z) == len(w)):
        raise ValueError(f"shape mismatch: {len(param_list)} measures, "
                         f"{len(z)} and {len(w)} coordinates")
    out = 1.0 + 0j
    for p, zj, wj in zip(param_list, z, w):
        out = out * R_kernel(p, zj, wj)
    return out


def point_bound(params: KernelParams, z):
    """``sqrt(F(|z|^2, |z|^2, |z|^2))``: bound on ``|f(z)| / ||f||``."""
    t = np.abs(np.asarray(z, dtype=complex)) ** 2
    return np.sqrt(np.real(F_qs(params, t, t, t)))


def product_point_bound(param_list, z):
    if len(param_list) != len(z):
        raise ValueError("shape mismatch between measures and coordinates")
    return math.prod(float(point_bound(p, zj)) for p, zj in zip(param_list, z))
