"""Command-line front end: ``polykernel {eval,compare,table,verify,moments,basis}``.

JSON output carries ``"schema": "polykernel/1"``; CSV output has a header row.
Floats are written with ``repr`` so they round-trip exactly.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import warnings

import numpy as np

from . import verify
from .errors import (ConditioningError, ConfigurationError, DomainError, EstimationError,
                     ParameterError, PolykernelError, RankError, TruncationWarning,
                     UnsupportedError)
from .kernelseries import (KernelParams, TruncationPolicy, convergence_lambda_radius,
                           kernel_series)
from .measures import bergman, discrete_atoms, exact_moment, fock, moment
from .orthopoly import build_basis

SCHEMA = "polykernel/1"
MAX_TERMS_ENV = "POLYKERNEL_MAX_TERMS"

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL_RE = re.compile(rf"[+-]?{_NUM}")
_IMAG_RE = re.compile(rf"[+-]?(?:{_NUM})?")


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi`` (no whitespace)."""
    if not text or text != text.strip() or " " in text:
        raise argparse.ArgumentTypeError(f"invalid complex literal {text!r}")
    if not text.endswith("i"):
        if not _REAL_RE.fullmatch(text):
            raise argparse.ArgumentTypeError(f"invalid complex literal {text!r}")
        return complex(float(text), 0.0)
    body = text[:-1]
    # split at the last sign that is not a leading sign or part of an exponent
    cut = 0
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            cut = k
            break
    re_part, im_part = body[:cut], body[cut:]
    if re_part and not _REAL_RE.fullmatch(re_part):
        raise argparse.ArgumentTypeError(f"invalid complex literal {text!r}")
    if not _IMAG_RE.fullmatch(im_part):
        raise argparse.ArgumentTypeError(f"invalid complex literal {text!r}")
    im = {"": 1.0, "+": 1.0, "-": -1.0}.get(im_part)
    if im is None:
        im = float(im_part)
    return complex(float(re_part) if re_part else 0.0, im)


def parse_point(text: str):
    """Comma-separated complex literals, one per coordinate."""
    return tuple(parse_complex(part) for part in text.split(","))


def parse_atoms(text: str):
    atoms = []
    for item in text.split(","):
        try:
            t, w = item.split(":")
            atoms.append((float(t), float(w)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid atom {item!r}, expected t:w") from None
    return atoms


def parse_grid(text: str):
    """``xmin:xmax:ymin:ymax:step`` over the z-plane."""
    try:
        x0, x1, y0, y1, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid grid {text!r}, expected xmin:xmax:ymin:ymax:step") from None
    if step <= 0 or x1 < x0 or y1 < y0:
        raise argparse.ArgumentTypeError("grid needs step > 0 and min <= max")
    return x0, x1, y0, y1, step


def _axis(lo, hi, step):
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + k * step for k in range(n)]


def _list(text, conv):
    try:
        return [conv(v) for v in str(text).split(",")]
    except ValueError:
        raise ConfigurationError(f"cannot parse {text!r}") from None


# -- parser ------------------------------------------------------------------


def _add_measure_args(p, multi=False):
    help_suffix = " (comma-separated per coordinate)" if multi else ""
    p.add_argument("--measure", default="bergman", help="bergman, fock or atoms" + help_suffix)
    p.add_argument("--alpha", default="0", help="weight parameter alpha > -1" + help_suffix)
    p.add_argument("--q", default="1", help="polyanalytic order q >= 1" + help_suffix)
    p.add_argument("--atoms", type=parse_atoms, default=None,
                   help='radial atoms "t:w,..." for --measure atoms')
    p.add_argument("--max-terms", type=int, default=None,
                   help=f"series cap (default: ${MAX_TERMS_ENV} or 512)")
    p.add_argument("--rel-tol", type=float, default=None, help="series stopping tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polykernel",
                                     description="Polyanalytic reproducing kernels.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate K(z, w)")
    _add_measure_args(p, multi=True)
    p.add_argument("--z", type=parse_point, help="point z, e.g. 0.1+0.2i (a,b for p=2)")
    p.add_argument("--w", type=parse_point, required=True, help="point w")
    p.add_argument("--grid", type=parse_grid, default=None,
                   help="scan z over xmin:xmax:ymin:ymax:step (p=1), CSV output")
    p.add_argument("--method", choices=["series", "closed"], default="series")

    p = sub.add_parser("compare", help="closed form vs series on a disc grid")
    _add_measure_args(p)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--n", type=int, default=9, help="grid points per axis")

    p = sub.add_parser("table", help="CSV table of closed form vs series")
    _add_measure_args(p)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--n", type=int, default=9)

    p = sub.add_parser("verify", help="run verification suites")
    _add_measure_args(p)
    p.add_argument("--suite", default="all",
                   choices=["orthonormality", "reproducing", "projection", "psd", "compare",
                            "all"])
    p.add_argument("--method", choices=["series", "closed", "both"], default="both")
    p.add_argument("--report-only", action="store_true",
                   help="record results without affecting the exit code")

    p = sub.add_parser("moments", help="moments s_0 .. s_{count-1}")
    _add_measure_args(p)
    p.add_argument("--count", type=int, default=8)

    p = sub.add_parser("basis", help="orthonormal coefficients of P_{d,0..n}")
    _add_measure_args(p)
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--n", type=int, default=None, help="max degree (default q-1)")
    return parser


# -- config ------------------------------------------------------------------


def _max_terms(args):
    if args.max_terms is not None:
        return args.max_terms
    env = os.environ.get(MAX_TERMS_ENV)
    if env is None or env == "":
        return TruncationPolicy().max_terms
    try:
        return int(env)
    except ValueError:
        raise ConfigurationError(f"{MAX_TERMS_ENV} must be an integer, got {env!r}") from None


def _policy(args):
    kw = {"max_terms": _max_terms(args)}
    if args.rel_tol is not None:
        kw["rel_tol"] = args.rel_tol
    return TruncationPolicy(**kw)


def _spec(name, alpha, atoms):
    if name == "bergman":
        return bergman(alpha)
    if name == "fock":
        return fock(alpha)
    if name == "atoms":
        if atoms is None:
            raise ConfigurationError("--measure atoms needs --atoms t:w,...")
        return discrete_atoms(atoms)
    raise ConfigurationError(f"unknown measure {name!r}")


def param_list(args, p=1):
    """One KernelParams per coordinate; scalar flags are broadcast."""
    names = _list(args.measure, str)
    alphas = _list(args.alpha, float)
    qs = _list(args.q, float)
    for vals in (names, alphas, qs):
        if len(vals) not in (1, p):
            raise ConfigurationError(f"expected 1 or {p} comma-separated values, got {len(vals)}")
    if any(q != int(q) for q in qs):
        raise ConfigurationError("q must be an integer")
    pol = _policy(args)
    pick = lambda vals, j: vals[j] if len(vals) > 1 else vals[0]
    return [KernelParams(_spec(pick(names, j), pick(alphas, j), args.atoms),
                         int(pick(qs, j)), pol) for j in range(p)]


# -- output ------------------------------------------------------------------


def _fmt(x) -> str:
    return repr(float(x))


def _json(obj) -> str:
    return json.dumps(obj, indent=2)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _cstr(z: complex) -> str:
    return f"{_fmt(z.real)}{'+' if z.imag >= 0 else '-'}{_fmt(abs(z.imag))}i"


# -- commands ----------------------------------------------------------------


ACCURACY_FRACTION = 0.9


def _warn_outside_accuracy(params, z, w):
    lam = abs(z) * abs(w)
    limit = ACCURACY_FRACTION * convergence_lambda_radius(params)
    if lam > limit:
        warnings.warn(f"|z||w| = {lam:.6g} exceeds the accuracy domain {limit:.6g}; "
                      "the series may be truncated", TruncationWarning, stacklevel=2)


def _eval_point(params_list, z, w, method):
    value = 1.0 + 0j
    terms, truncated = [], False
    for params, zj, wj in zip(params_list, z, w):
        if method == "closed":
            value *= complex(verify.kernel(params, zj, wj, "closed"))
        else:
            _warn_outside_accuracy(params, zj, wj)
            res = kernel_series(params, zj, wj)
            value *= res.value
            terms.append(res.terms_used)
            truncated = truncated or res.truncated
    if method == "closed":
        return value, None, False
    return value, terms[0] if len(terms) == 1 else terms, truncated


def cmd_eval(args):
    p = len(args.w)
    params = param_list(args, p)
    if args.grid is not None:
        if p != 1:
            raise ConfigurationError("--grid is only supported for p = 1")
        if args.z is not None:
            raise ConfigurationError("--grid replaces --z")
        x0, x1, y0, y1, step = args.grid
        rows = []
        # scan order: y outer ascending, x inner ascending
        for y in _axis(y0, y1, step):
            for x in _axis(x0, x1, step):
                val, terms, trunc = _eval_point(params, (complex(x, y),), args.w, args.method)
                rows.append([float(x), float(y), val.real, val.imag,
                             "" if terms is None else terms, str(trunc).lower()])
        return _csv(["z_re", "z_im", "re", "im", "terms_used", "truncated"], rows), 0
    if args.z is None:
        raise ConfigurationError("eval needs --z or --grid")
    if len(args.z) != p:
        raise ConfigurationError(f"--z has {len(args.z)} coordinates, --w has {p}")
    val, terms, trunc = _eval_point(params, args.z, args.w, args.method)
    out = {"schema": SCHEMA, "re": val.real, "im": val.imag,
           "terms_used": terms, "truncated": trunc}
    return _json(out), 0


def _compare_grid(args, params):
    if not verify.has_closed_form(params.spec):
        raise UnsupportedError(f"no closed form for {params.spec.label}")
    radius = args.radius if args.radius is not None else verify.default_radius(params)
    if args.n < 1:
        raise ConfigurationError("--n must be >= 1")
    return radius, verify.disc_grid(radius, args.n)


def cmd_compare(args):
    params = param_list(args)[0]
    radius, grid = _compare_grid(args, params)
    err, (za, wa) = verify.compare_methods(params, grid, grid)
    plain, _ = verify.compare_methods(params, grid, grid, plain=True)
    out = {"schema": SCHEMA,
           "grid": {"kind": "disc", "radius": radius, "n": args.n, "pairs": args.n ** 2},
           "max_rel_err": err,
           "argmax_point": {"z": _cstr(za), "w": _cstr(wa)},
           "metric": "|closed-series|/sqrt(K(z,z)K(w,w))",
           "max_plain_rel_err": plain}
    return _json(out), 0


def cmd_table(args):
    params = param_list(args)[0]
    _, grid = _compare_grid(args, params)
    rows = []
    diag = {complex(g): float(np.real(verify.kernel(params, g, g, "series"))) for g in grid}
    for z in grid:
        ser = np.asarray(verify.kernel(params, z, grid, "series"))
        clo = np.asarray(verify.kernel(params, z, grid, "closed"))
        for w, s, c in zip(grid, ser, clo):
            err = abs(c - s)
            rows.append([z.real, z.imag, w.real, w.imag, s.real, s.imag, c.real, c.imag,
                         float(err), float(err / math.sqrt(diag[complex(z)] * diag[complex(w)]))])
    header = ["z_re", "z_im", "w_re", "w_im", "series_re", "series_im", "closed_re",
              "closed_im", "abs_err", "rel_err"]
    return _csv(header, rows), 0


def cmd_verify(args):
    params = param_list(args)[0]
    methods = ["series", "closed"] if args.method == "both" else [args.method]
    if args.method == "closed" and not verify.has_closed_form(params.spec):
        raise UnsupportedError(f"no closed form for {params.spec.label}")
    reports = verify.run_suite(args.suite, params, methods, report_only=args.report_only)
    if args.report_only:
        for rep in reports:
            rep.report_only = True
    ok = all(rep.passed for rep in reports if not rep.report_only)
    out = {"schema": SCHEMA, "all_pass": ok, "reports": [rep.to_dict() for rep in reports]}
    return _json(out), 0 if ok else 1


def cmd_moments(args):
    params = param_list(args)[0]
    if args.count < 1:
        raise ConfigurationError("--count must be >= 1")
    rows = []
    for d in range(args.count):
        ex = exact_moment(params.spec, d)
        rows.append({"d": d, "s": moment(params.spec, d),
                     "s_exact": None if ex is None else str(ex)})
    return _json({"schema": SCHEMA, "measure": params.spec.label, "moments": rows}), 0


def cmd_basis(args):
    params = param_list(args)[0]
    n = params.q - 1 if args.n is None else args.n
    if args.d < 0 or n < 0:
        raise ConfigurationError("--d and --n must be nonnegative")
    b = build_basis(params.spec, args.d, n)
    coeffs = b.coeffs
    rows = [[k] + [float(c) for c in coeffs[k]] for k in range(n + 1)]
    return _csv(["degree"] + [f"c{j}" for j in range(n + 1)], rows), 0


COMMANDS = {"eval": cmd_eval, "compare": cmd_compare, "table": cmd_table,
            "verify": cmd_verify, "moments": cmd_moments, "basis": cmd_basis}

# raised while assembling the configuration: treated as usage errors
_USAGE_ERRORS = (ConfigurationError, ParameterError)
_RUNTIME_ERRORS = (DomainError, ConditioningError, RankError, EstimationError,
                   UnsupportedError, PolykernelError)


def _error_json(exc) -> str:
    err = {"type": type(exc).__name__, "message": str(exc)}
    cond = getattr(exc, "cond_estimate", None)
    if cond is not None:
        err["cond_estimate"] = cond
    return _json({"schema": SCHEMA, "error": err})


_VALUE_FLAGS = ("--z", "--w", "--grid", "--alpha")


def _glue_values(argv):
    """Join ``--z -0.5i`` into ``--z=-0.5i`` so a leading minus is not read as a flag."""
    out, k = [], 0
    while k < len(argv):
        if argv[k] in _VALUE_FLAGS and k + 1 < len(argv):
            out.append(f"{argv[k]}={argv[k + 1]}")
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_values(argv))
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", TruncationWarning)
            text, code = COMMANDS[args.command](args)
    except _USAGE_ERRORS as exc:
        parser.error(str(exc))
    except _RUNTIME_ERRORS as exc:
        sys.stdout.write(_error_json(exc) + "\n")
        return 1
    seen = set()
    for w in caught:
        msg = str(w.message)
        if issubclass(w.category, TruncationWarning) and msg not in seen:
            seen.add(msg)
            sys.stderr.write(f"polykernel: warning: {msg}\n")
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
