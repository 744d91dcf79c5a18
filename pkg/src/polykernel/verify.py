"""Exact quadrature over rotation-invariant measures and the verification checks.

A :class:`QuadratureRule` is a Gauss rule in ``t = |z|^2`` (nodes from the
eigenvalues of the measure's own Jacobi matrix) times an equispaced angular
grid.  It integrates ``t^k e^{i j theta}`` exactly for
``k <= exactness_degree`` and ``|j| <= 2 * max_freq``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import closedform
from .errors import ConfigurationError, UnsupportedError
from .kernelseries import H_basis, KernelParams, R_kernel, convergence_lambda_radius
from .measures import Kind, MeasureSpec, moment
from .orthopoly import build_basis, recurrence

TOL_EXACT = 1e-10
TOL_SERIES = 1e-6


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    angular_count: int
    exactness_degree: float

    @property
    def max_freq(self) -> int:
        return (self.angular_count - 1) // 2

    def points(self):
        """Planar nodes and weights, flattened radial-major."""
        theta = 2 * np.pi * np.arange(self.angular_count) / self.angular_count
        z = np.sqrt(self.nodes)[:, None] * np.exp(1j * theta)[None, :]
        w = np.repeat(self.weights / self.angular_count, self.angular_count)
        return z.ravel(), w


def gauss_radial(spec: MeasureSpec, n_nodes: int):
    """Gauss nodes/weights of ``mu`` from its three-term recurrence."""
    a, b = recurrence(spec, n_nodes)
    nodes, vecs = eigh_tridiagonal(a, np.sqrt(b))
    weights = moment(spec, 0) * vecs[0, :] ** 2
    return nodes, weights


def build_rule(spec: MeasureSpec, radial_degree: int, max_freq: int) -> QuadratureRule:
    """Product rule with ``radial_degree`` Gauss nodes in t and ``2*max_freq+1`` angles.

    A finitely supported measure is its own radial rule.
    """
    if radial_degree < 1:
        raise ValueError("radial_degree must be >= 1")
    if spec.kind is Kind.ATOMS:
        nodes = np.array([t for t, _ in spec.atoms])
        weights = np.array([w for _, w in spec.atoms])
        exact = math.inf
    else:
        nodes, weights = gauss_radial(spec, radial_degree)
        exact = 2 * radial_degree - 1
    return QuadratureRule(nodes, weights, 2 * max_freq + 1, exact)


def integrate(rule: QuadratureRule, f):
    """``int f dnu`` for a vectorised complex function f."""
    z, w = rule.points()
    return complex(np.sum(w * f(z)))


# -- polyanalytic polynomials ------------------------------------------------


@dataclass
class PolyanalyticPoly:
    """``sum c[a, b] z^a conj(z)^b``, stored sparsely."""

    coeffs: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return 1 + max((b for (_, b), c in self.coeffs.items() if c != 0), default=-1)

    @property
    def degree(self) -> int:
        """Largest ``max(a, b)`` over the monomials present."""
        return max((max(a, b) for (a, b), c in self.coeffs.items() if c != 0), default=0)

    def freq_range(self):
        fr = [a - b for (a, b), c in self.coeffs.items() if c != 0] or [0]
        return min(fr), max(fr)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for (a, b), c in self.coeffs.items():
            out = out + c * z**a * np.conj(z) ** b
        return out

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return PolyanalyticPoly(out)

    def scaled(self, s):
        return PolyanalyticPoly({k: s * c for k, c in self.coeffs.items()})

    def max_coeff_diff(self, other) -> float:
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(self.coeffs.get(k, 0) - other.coeffs.get(k, 0)) for k in keys),
                   default=0.0)

    @classmethod
    def random(cls, rng, q: int, degree: int):
        """Complex coefficients uniform in ``[-1, 1]^2`` on ``a <= degree, b < q``."""
        coeffs = {}
        for a in range(degree + 1):
            for b in range(q):
                coeffs[(a, b)] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        return cls(coeffs)


def H_as_poly(params: KernelParams, m: int, n: int) -> PolyanalyticPoly:
    d, k = abs(m - n), min(m, n)
    c = build_basis(params.spec, d, k).coeffs[k, : k + 1]
    if m >= n:
        return PolyanalyticPoly({(d + i, i): float(c[i]) for i in range(k + 1)})
    return PolyanalyticPoly({(i, d + i): float(c[i]) for i in range(k + 1)})


# -- reports -----------------------------------------------------------------


@dataclass
class VerificationReport:
    check_name: str
    parameters: dict
    max_error: float
    tolerance: float
    passed: bool = field(init=False)
    notes: str = ""
    report_only: bool = False

    def __post_init__(self):
        self.passed = bool(self.max_error <= self.tolerance)

    def to_dict(self):
        out = asdict(self)
        out["pass"] = out.pop("passed")
        return out


def _describe(params: KernelParams, **extra):
    out = {"measure": params.spec.label, "q": params.q}
    out.update(extra)
    return out


# -- kernel dispatch ---------------------------------------------------------


def kernel(params: KernelParams, z, w, method: str = "series"):
    """Evaluate the kernel by series or, for Bergman/Fock weights, in closed form."""
    if method == "series":
        return R_kernel(params, z, w)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    spec = params.spec
    if spec.kind is Kind.BERGMAN:
        return closedform.bergman_kernel(spec.alpha, params.q, z, w)
    if spec.kind is Kind.FOCK:
        return closedform.fock_kernel(spec.alpha, params.q, z, w)
    raise UnsupportedError(f"no closed form for {spec.label}")


def has_closed_form(spec: MeasureSpec) -> bool:
    return spec.kind in (Kind.BERGMAN, Kind.FOCK)


# -- checks ------------------------------------------------------------------


def check_H_orthonormality(params: KernelParams, M: int, rule: QuadratureRule,
                           tol: float = TOL_EXACT) -> VerificationReport:
    need = M + params.q - 1
    if rule.exactness_degree < need or 2 * rule.max_freq < need:
        raise ConfigurationError(
            f"rule must integrate t^{need} and frequency {need} exactly "
            f"(has degree {rule.exactness_degree}, frequency {2 * rule.max_freq})")
    z, w = rule.points()
    rows = np.array([H_basis(params, m, n, z) for n in range(params.q) for m in range(M + 1)])
    gram = (rows * w) @ rows.conj().T
    err = float(np.max(np.abs(gram - np.eye(len(rows)))))
    return VerificationReport("orthonormality", _describe(params, M=M), err, tol)


def angular_count_for(params: KernelParams, z_max: float, t_max: float, degree: int) -> int:
    """Angles needed so the kernel's high frequencies do not alias into degree."""
    lam = z_max * math.sqrt(t_max)
    r2 = convergence_lambda_radius(params)
    if math.isinf(r2):
        # coefficients decay like lam^k / k! ~ (e lam / k)^k
        extra = degree + 40
        while lam > 0 and extra * math.log(math.e * lam / extra) > -40 * math.log(10):
            extra += 1
    else:
        rho = lam / r2
        # polynomial growth of the coefficients is absorbed by the 1e-40 target
        if rho >= 1:
            extra = 4000
        else:
            extra = math.ceil(-40 * math.log(10) / math.log(rho)) if rho > 0 else 0
            extra = min(extra, 4000)
    return 2 * (degree + extra) + 1


def reproducing_rule(params: KernelParams, degree: int, z_max: float) -> QuadratureRule:
    """Rule exact for order-q polynomials of analytic degree ``degree`` against the kernel."""
    n_nodes = max(1, math.ceil((degree + params.q) / 2))
    base = build_rule(params.spec, n_nodes, 1)
    count = angular_count_for(params, z_max, float(np.max(base.nodes)), degree + params.q)
    return QuadratureRule(base.nodes, base.weights, count, base.exactness_degree)


def reproduce(params: KernelParams, f: PolyanalyticPoly, z, rule: QuadratureRule,
              method: str = "series", kernel_values=None):
    """``<f, K(., z)> = int f(w) K(z, w) dnu(w)``."""
    pts, wts = rule.points()
    if kernel_values is None:
        kernel_values = kernel(params, z, pts, method)
    return complex(np.sum(wts * f(pts) * kernel_values))


def _check_reproducing_rule(params, f, rule):
    if f.order > params.q:
        raise ConfigurationError(f"f has order {f.order} > q={params.q}")
    need = f.degree + params.q - 1
    lo, hi = f.freq_range()
    if rule.exactness_degree < need or 2 * rule.max_freq < max(hi, -lo) + params.q:
        raise ConfigurationError("quadrature rule does not resolve this reproducing check")


def check_reproducing(params: KernelParams, f: PolyanalyticPoly, z, rule: QuadratureRule,
                      method: str = "series", tol=None, kernel_values=None) -> VerificationReport:
    _check_reproducing_rule(params, f, rule)
    fz = complex(f(z))
    got = reproduce(params, f, z, rule, method, kernel_values)
    tol = 1e-9 * (1 + abs(fz)) if tol is None else tol
    return VerificationReport("reproducing", _describe(params, z=str(complex(z)), method=method),
                              abs(got - fz), tol)


def project(params: KernelParams, g: PolyanalyticPoly, rule: QuadratureRule,
            M: int) -> PolyanalyticPoly:
    """Orthogonal projection of g onto ``span{H_{m,n}: m <= M, n < q}``."""
    lo, hi = g.freq_range()
    q = params.q
    if rule.exactness_degree < max(g.degree, M + q - 1) or \
            2 * rule.max_freq < max(hi + q - 1, M - lo):
        raise ConfigurationError("quadrature rule does not resolve the projection")
    pts, wts = rule.points()
    gv = g(pts)
    out = PolyanalyticPoly({})
    for n in range(q):
        for m in range(M + 1):
            coef = complex(np.sum(wts * gv * np.conj(H_basis(params, m, n, pts))))
            if coef != 0:
                out = out + H_as_poly(params, m, n).scaled(coef)
    return out


def gram_matrix(params: KernelParams, points, method: str = "series") -> np.ndarray:
    pts = np.asarray(points, dtype=complex)
    zz, ww = np.meshgrid(pts, pts, indexing="ij")
    return np.asarray(kernel(params, zz, ww, method))


def check_gram_psd(params: KernelParams, points, method: str = "series",
                   tol: float = 1e-9) -> VerificationReport:
    g = gram_matrix(params, points, method)
    herm = float(np.max(np.abs(g - g.conj().T)) / (1 + np.max(np.abs(g))))
    eig = np.linalg.eigvalsh(0.5 * (g + g.conj().T))
    # pass iff min eig >= -tol * max eig
    err = max(0.0, -eig[0]) / max(eig[-1], 1e-300)
    return VerificationReport("psd", _describe(params, n_points=len(points), method=method),
                              err, tol, notes=f"min_eig={eig[0]:.3e} max_eig={eig[-1]:.3e} "
                                              f"hermitian_residual={herm:.3e}")


def compare_methods(params: KernelParams, zs, ws, plain: bool = False):
    """Max gap between closed form and series over all ``(z, w)`` pairs.

    The gap is measured relative to ``sqrt(K(z, z) K(w, w))``, which bounds
    ``|K(z, w)|`` and stays positive where the kernel itself vanishes.  With
    ``plain=True`` the denominator is ``|K(z, w)|`` instead.
    """
    zs = np.asarray(zs, dtype=complex)
    ws = np.asarray(ws, dtype=complex)
    zz, ww = np.meshgrid(zs, ws, indexing="ij")
    closed = np.asarray(kernel(params, zz, ww, "closed"))
    ser = np.asarray(kernel(params, zz, ww, "series"))
    if plain:
        scale = np.abs(ser)
    else:
        dz = np.real(kernel(params, zs, zs, "series"))
        dw = np.real(kernel(params, ws, ws, "series"))
        scale = np.sqrt(np.outer(dz, dw))
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.abs(closed - ser) / scale
    rel = np.where(np.isnan(rel), np.inf, rel)
    i = np.unravel_index(int(np.argmax(rel)), rel.shape)
    return float(rel[i]), (complex(zz[i]), complex(ww[i]))


def disc_grid(radius: float, n: int = 9):
    """n deterministic points spread over the closed disc of the given radius."""
    k = np.arange(n)
    r = radius * np.sqrt(k / max(n - 1, 1))
    theta = 2 * np.pi * k * (math.sqrt(5) - 1) / 2
    return r * np.exp(1j * theta)


def random_disc_points(rng, n: int, radius: float):
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def check_compare(params: KernelParams, radius: float, tol: float,
                  report_only: bool = False, n: int = 9) -> VerificationReport:
    grid = disc_grid(radius, n)
    err, (za, wa) = compare_methods(params, grid, grid)
    plain, (zp, wp) = compare_methods(params, grid, grid, plain=True)
    rep = VerificationReport("compare", _describe(params, grid=f"{n}x{n} disc radius {radius:g}"),
                             err, tol, report_only=report_only,
                             notes=f"argmax z={za} w={wa}; |K|-relative max {plain:.3g} "
                                   f"at z={zp} w={wp}")
    return rep


# -- product measures --------------------------------------------------------


def product_reproduce(param_list, f, z, rules, method: str = "series") -> complex:
    """``int f(w1, w2) K1(z1, w1) K2(z2, w2) dnu1 dnu2`` for p = 2."""
    (p1, w1), (p2, w2) = (r.points() for r in rules)
    k1 = np.asarray(kernel(param_list[0], z[0], p1, method))
    k2 = np.asarray(kernel(param_list[1], z[1], p2, method))
    fv = f(p1[:, None], p2[None, :])
    return complex(np.einsum("i,j,ij->", w1 * k1, w2 * k2, fv))


# -- suites used by the CLI --------------------------------------------------


def default_radius(params: KernelParams) -> float:
    """Radius of the test points: 2 for Fock, else half-way into the safe disc."""
    r = math.sqrt(convergence_lambda_radius(params))
    if math.isinf(r):
        return 2.0
    return 0.5 * r if params.spec.kind is Kind.ATOMS else 0.7 * r


def suite_orthonormality(params: KernelParams, M: int = 8):
    rule = build_rule(params.spec, max(1, math.ceil((M + params.q) / 2)), M + params.q)
    return [check_H_orthonormality(params, M, rule)]


def suite_reproducing(params: KernelParams, methods, n_funcs=20, n_points=5, degree=6, seed=0):
    rng = np.random.default_rng(seed)
    radius = default_radius(params)
    rule = reproducing_rule(params, degree, radius)
    funcs = [PolyanalyticPoly.random(rng, params.q, degree) for _ in range(n_funcs)]
    zs = random_disc_points(rng, n_points, radius)
    pts, _ = rule.points()
    out = []
    for method in methods:
        worst = None
        for z in zs:
            kv = kernel(params, z, pts, method)
            for f in funcs:
                rep = check_reproducing(params, f, z, rule, method, kernel_values=kv)
                rel = rep.max_error / rep.tolerance
                if worst is None or rel > worst[0]:
                    worst = (rel, rep)
        rep = worst[1]
        rep.notes = f"worst of {n_funcs} functions x {n_points} points"
        out.append(rep)
    return out


def suite_projection(params: KernelParams, M: int = 6, n_funcs: int = 5, seed=0):
    """Idempotence: projecting a member of the truncated space returns it."""
    rng = np.random.default_rng(seed)
    q = params.q
    rule = build_rule(params.spec, max(1, math.ceil((M + q) / 2)), M + q)
    worst = 0.0
    for _ in range(n_funcs):
        g = PolyanalyticPoly.random(rng, q, M)
        worst = max(worst, project(params, g, rule, M).max_coeff_diff(g))
    return [VerificationReport("projection", _describe(params, M=M), worst, TOL_EXACT,
                               notes=f"worst of {n_funcs} order-{q} polynomials")]


def suite_psd(params: KernelParams, methods, seed=0):
    rng = np.random.default_rng(seed)
    r = math.sqrt(convergence_lambda_radius(params))
    if math.isinf(r):
        radius = 2.0
    else:
        radius = (0.5 if params.spec.kind is Kind.ATOMS else 0.8) * r
    pts = random_disc_points(rng, 6, radius)
    return [check_gram_psd(params, pts, m) for m in methods]


def suite_compare(params: KernelParams, report_only: bool = False):
    spec = params.spec
    if spec.kind is Kind.BERGMAN:
        return [check_compare(params, 0.7, TOL_SERIES, report_only)]
    if spec.kind is Kind.FOCK:
        only = report_only or spec.alpha != 0
        return [check_compare(params, 2.0, 1e-8, only)]
    return []


def run_suite(name: str, params: KernelParams, methods=("series",), report_only=False):
    methods = [m for m in methods if m == "series" or has_closed_form(params.spec)]
    if name == "all":
        names = ["orthonormality", "reproducing", "projection", "psd", "compare"]
    else:
        names = [name]
    out = []
    for n in names:
        if n == "orthonormality":
            out += suite_orthonormality(params)
        elif n == "reproducing":
            # an unsupported closed form for Fock alpha != 0 is a report, not an assertion
            out += suite_reproducing(params, methods)
        elif n == "projection":
            out += suite_projection(params)
        elif n == "psd":
            out += suite_psd(params, methods)
        elif n == "compare":
            out += suite_compare(params, report_only)
        else:
            raise ValueError(f"unknown suite {n!r}")
    spec = params.spec
    if spec.kind is Kind.FOCK and spec.alpha != 0:
        for rep in out:
            if rep.parameters.get("method") == "closed":
                rep.report_only = True
    return out


def kernel_section_poly(params: KernelParams, w, M: int) -> PolyanalyticPoly:
    """``sum_{m<=M, n<q} conj(H_{m,n}(w)) H_{m,n}``: the series kernel ``K(., w)`` truncated."""
    out = PolyanalyticPoly({})
    for n in range(params.q):
        for m in range(M + 1):
            out = out + H_as_poly(params, m, n).scaled(complex(np.conj(H_basis(params, m, n, w))))
    return out


def discrepancy_paths(params: KernelParams, z, w, M: int = 40, extra_degree: int = 60):
    """Closed-vs-series gap at ``(z, w)`` measured two ways.

    Pointwise: ``|K_closed(z, w) - K_series(z, w)|``.  Through reproduction:
    ``|<f, K_closed(., z)> - f(z)|`` with f the truncated series section
    ``K_series(., w)``; the two agree when the closed form is the kernel and
    track each other when it is not.
    """
    f = kernel_section_poly(params, w, M)
    rule = reproducing_rule(params, M + extra_degree, abs(z))
    via = abs(reproduce(params, f, z, rule, "closed") - complex(f(z)))
    direct = abs(complex(kernel(params, z, w, "closed")) - complex(kernel(params, z, w, "series")))
    return via, direct
