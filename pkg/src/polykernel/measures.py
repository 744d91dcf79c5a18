"""Radial measures on [0, inf) and their Stieltjes moment sequences.

A rotation-invariant measure on the plane is described here by its radial
profile ``mu`` in the variable ``t = |z|**2``.  The built-in profiles are

* ``bergman(alpha)``: ``(1 - t)**alpha dt`` on [0, 1), left unnormalised so
  that ``s_0 = 1/(alpha + 1)``;
* ``fock(alpha)``: ``t**alpha exp(-t) dt / Gamma(alpha + 1)``, a probability
  measure;
* ``discrete_atoms(...)``: a finite sum of weighted point masses;
* ``raw_moments(...)``: a black-box moment provider.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import EstimationError, ParameterError

# Moments consulted by the RawMoments radius estimate.
RAW_MIN_MOMENTS = 16
RAW_RADIUS_CUTOFF = 400


class Kind(enum.Enum):
    BERGMAN = "bergman"
    FOCK = "fock"
    ATOMS = "atoms"
    RAW = "raw"


@dataclass(frozen=True)
class MeasureSpec:
    kind: Kind
    alpha: Optional[float] = None
    atoms: tuple = ()
    provider: Optional[Callable[[int], float]] = field(default=None, compare=False)
    exact_provider: Optional[Callable[[int], Fraction]] = field(default=None, compare=False)
    available: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        if self.kind in (Kind.BERGMAN, Kind.FOCK):
            if self.alpha is None or not math.isfinite(self.alpha) or self.alpha <= -1:
                raise ParameterError(f"alpha must be a finite real > -1, got {self.alpha!r}")
        elif self.kind is Kind.ATOMS:
            if not self.atoms:
                raise ParameterError("DiscreteAtoms needs at least one atom")
            ts = [t for t, _ in self.atoms]
            if any(not math.isfinite(t) or t < 0 for t in ts):
                raise ParameterError("atom positions must be finite and >= 0")
            if any(not (w > 0 and math.isfinite(w)) for _, w in self.atoms):
                raise ParameterError("atom weights must be finite and > 0")
            if len(set(ts)) != len(ts):
                raise ParameterError("atom positions must be pairwise distinct")
        elif self.kind is Kind.RAW:
            if self.provider is None:
                raise ParameterError("RawMoments needs a moment provider")
        # RawMoments providers are compared by identity so specs stay hashable.

    def __hash__(self):
        return hash((self.kind, self.alpha, self.atoms, id(self.provider), self.available))

    def __eq__(self, other):
        if not isinstance(other, MeasureSpec):
            return NotImplemented
        return (self.kind, self.alpha, self.atoms, self.available) == (
            other.kind, other.alpha, other.atoms, other.available
        ) and self.provider is other.provider

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.kind in (Kind.BERGMAN, Kind.FOCK):
            return f"{self.kind.value}(alpha={self.alpha:g})"
        if self.kind is Kind.ATOMS:
            return "atoms(" + ",".join(f"{t:g}:{w:g}" for t, w in self.atoms) + ")"
        return "raw"


def bergman(alpha: float) -> MeasureSpec:
    return MeasureSpec(Kind.BERGMAN, alpha=float(alpha))


def fock(alpha: float = 0.0) -> MeasureSpec:
    return MeasureSpec(Kind.FOCK, alpha=float(alpha))


def discrete_atoms(atoms: Sequence[tuple]) -> MeasureSpec:
    """Finite measure ``sum_k w_k delta_{t_k}``; atoms are ``(t_k, w_k)`` pairs."""
    pts = tuple(sorted((float(t), float(w)) for t, w in atoms))
    return MeasureSpec(Kind.ATOMS, atoms=pts)


def raw_moments(provider, exact_provider=None, available=None, name="raw") -> MeasureSpec:
    return MeasureSpec(Kind.RAW, provider=provider, exact_provider=exact_provider,
                       available=available, name=name)


def positive_atom_count(spec: MeasureSpec) -> int:
    return sum(1 for t, _ in spec.atoms if t > 0)


def _check_d(d):
    if d < 0 or int(d) != d:
        raise ParameterError(f"moment index must be a nonnegative integer, got {d!r}")


def log_moment(spec: MeasureSpec, d: int) -> float:
    """``log s_d``; finite for every d on the built-in kinds."""
    _check_d(d)
    if spec.kind is Kind.BERGMAN:
        a = spec.alpha
        return math.lgamma(d + 1) + math.lgamma(a + 1) - math.lgamma(d + a + 2)
    if spec.kind is Kind.FOCK:
        a = spec.alpha
        return math.lgamma(a + d + 1) - math.lgamma(a + 1)
    if spec.kind is Kind.ATOMS:
        ts = np.array([t for t, _ in spec.atoms])
        ws = np.array([w for _, w in spec.atoms])
        if d == 0:
            return math.log(ws.sum())
        keep = ts > 0
        if not keep.any():
            return -math.inf
        return float(logsumexp(np.log(ws[keep]) + d * np.log(ts[keep])))
    if spec.available is not None and d >= spec.available:
        raise EstimationError(f"moment {d} not available (provider has {spec.available})")
    return math.log(spec.provider(d))


def moment(spec: MeasureSpec, d: int) -> float:
    """``s_d``, the d-th moment of the radial profile."""
    if spec.kind is Kind.ATOMS:
        _check_d(d)
        return math.fsum(w * t**d for t, w in spec.atoms)
    if spec.kind is Kind.RAW:
        _check_d(d)
        if spec.available is not None and d >= spec.available:
            raise EstimationError(f"moment {d} not available (provider has {spec.available})")
        return float(spec.provider(d))
    _check_d(d)
    if d <= 150:
        # short products are more accurate than exp(lgamma) and cannot overflow here
        s0 = 1.0 / (spec.alpha + 1) if spec.kind is Kind.BERGMAN else 1.0
        val = s0 * moment_ratio(spec, 0, d)
        if math.isfinite(val) and val > 0:
            return val
    return math.exp(log_moment(spec, d))


def shifted_moment(spec: MeasureSpec, d: int, j: int) -> float:
    """j-th moment of ``x**d dmu``, i.e. ``s_{d+j}``."""
    _check_d(j)
    return moment(spec, d + j)


def log_moment_ratio(spec: MeasureSpec, d: int, k: int) -> float:
    """``log(s_{d+k} / s_d)`` without forming either moment."""
    return math.log(moment_ratio(spec, d, k))


def moment_ratio(spec: MeasureSpec, d: int, k: int) -> float:
    """``s_{d+k} / s_d``; a k-term product for the weights, so errors stay O(k eps)."""
    if spec.kind is Kind.BERGMAN:
        a = spec.alpha
        return math.prod((d + j) / (d + j + a + 1) for j in range(1, k + 1))
    if spec.kind is Kind.FOCK:
        a = spec.alpha
        return math.prod(a + d + j for j in range(1, k + 1))
    return math.exp(log_moment(spec, d + k) - log_moment(spec, d))


def exact_moment_ratio(spec: MeasureSpec, d: int, k: int) -> Optional[Fraction]:
    """Exact ``s_{d+k} / s_d`` for the weights, else None."""
    if spec.kind is Kind.BERGMAN:
        a = Fraction(spec.alpha)
        return math.prod((Fraction(d + j) / (d + j + a + 1) for j in range(1, k + 1)),
                         start=Fraction(1))
    if spec.kind is Kind.FOCK:
        a = Fraction(spec.alpha)
        return math.prod((a + d + j for j in range(1, k + 1)), start=Fraction(1))
    return None


def exact_moment(spec: MeasureSpec, d: int) -> Optional[Fraction]:
    """Exact rational ``s_d``, or None when the kind has no rational form.

    Bergman and Fock moments are rational whenever alpha is; a float alpha is
    taken at its exact binary value.
    """
    _check_d(d)
    if spec.kind is Kind.BERGMAN:
        a = Fraction(spec.alpha)
        # d! Gamma(a+1) / Gamma(d+a+2) = d! / prod_{k=1}^{d+1} (a + k)
        den = Fraction(1)
        for k in range(1, d + 2):
            den *= a + k
        return Fraction(math.factorial(d)) / den
    if spec.kind is Kind.FOCK:
        a = Fraction(spec.alpha)
        out = Fraction(1)
        for k in range(1, d + 1):
            out *= a + k
        return out
    if spec.kind is Kind.ATOMS:
        return sum((Fraction(w) * Fraction(t) ** d for t, w in spec.atoms), Fraction(0))
    if spec.exact_provider is not None:
        return Fraction(spec.exact_provider(d))
    return None


@dataclass(frozen=True)
class MomentSequence:
    spec: MeasureSpec

    def float_value(self, d: int) -> float:
        return moment(self.spec, d)

    def rational_value(self, d: int) -> Optional[Fraction]:
        return exact_moment(self.spec, d)

    @property
    def has_rational(self) -> bool:
        return self.spec.kind is not Kind.RAW or self.spec.exact_provider is not None

    def __getitem__(self, d: int) -> float:
        return self.float_value(d)


def moment_sequence(spec: MeasureSpec) -> MomentSequence:
    return MomentSequence(spec)


@dataclass(frozen=True)
class SupportRadius:
    """Radius of the disc carrying the planar measure (``sqrt`` of the radial sup)."""

    r_s: float
    approximate: bool = False

    @property
    def lambda_radius(self) -> float:
        """Radius ``R_s**2`` of the convergence disc in ``lambda = z conj(w)``."""
        return self.r_s ** 2

    def contains(self, z) -> bool:
        return bool(np.all(np.abs(z) < self.r_s))


def support_radius(spec: MeasureSpec) -> SupportRadius:
    if spec.kind is Kind.BERGMAN:
        return SupportRadius(1.0)
    if spec.kind is Kind.FOCK:
        return SupportRadius(math.inf)
    if spec.kind is Kind.ATOMS:
        return SupportRadius(math.sqrt(max(t for t, _ in spec.atoms)))
    n_avail = spec.available if spec.available is not None else RAW_RADIUS_CUTOFF + 1
    if n_avail < RAW_MIN_MOMENTS:
        raise EstimationError(
            f"need at least {RAW_MIN_MOMENTS} moments to estimate the radius, have {n_avail}")
    d = min(n_avail - 1, RAW_RADIUS_CUTOFF)
    return SupportRadius(math.exp(log_moment(spec, d) / (2 * d)), approximate=True)
