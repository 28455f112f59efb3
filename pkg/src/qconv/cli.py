"""Command-line interface: ``qconv <command> ...``.

Functions are passed as JSON descriptors (inline, ``@file`` or ``-`` for
stdin) or as a builtin shorthand ``name`` / ``name:key=value,...``.
Tables go to stdout as CSV (or JSON with ``--format json``); descriptors
are always JSON.  See README.md for the descriptor schema.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys

import numpy as np

from . import checks
from .convolve import (ConvolutionPlan, convolution_inverse_report, convolve, moments_any,
                       plan_convolution)
from .errors import QConvError
from .fourier import fourier_formal, fourier_formal_prime, fourier_inverse_G
from .gaussian import (G_k, GaussianSeries, big_gaussian_function, cos_q, eq2_gaussian,
                       exp_i_function, g_m, hermite2_gaussian, sin_q, unit_u)
from .lattice import DiscreteDelta, LatticeFunction, lattice_window
from .qcore import QContext
from .qsolve import QDiffOperator, solve
from .series import PowerSeries

__all__ = [
    "ParseError",
    "parse_descriptor",
    "serialize_descriptor",
    "build",
    "describe",
    "main",
]

KINDS = ("builtin", "gaussian_series", "power_series", "lattice_table", "delta")

# name -> parameters it accepts (gamma is always allowed)
BUILTINS = {
    "eq2_gaussian": (),
    "Eq2_gaussian": (),
    "g_m": ("m",),
    "G_k": ("k",),
    "u": (),
    "hermite2_l": ("l",),
    "eq_exp_i": (),
    "cos_q": (),
    "sin_q": (),
    "delta": ("sign", "p"),
}

TABLE_WINDOW = (-8, 20)


class ParseError(ValueError):
    """Malformed descriptor; ``line`` and ``column`` are 1-based."""

    def __init__(self, msg, line=1, column=1, key=None):
        super().__init__(f"line {line}, column {column}: {msg}")
        self.msg = msg
        self.line = line
        self.column = column
        self.key = key


def _locate_key(text, key):
    i = text.find(f'"{key}"')
    if i < 0:
        return 1, 1
    line = text.count("\n", 0, i) + 1
    return line, i - (text.rfind("\n", 0, i) + 1) + 1


# ----------------------------------------------------------------------------
# descriptors


def _cnum(v, where):
    if isinstance(v, bool):
        raise ParseError(f"{where}: expected a number, got a boolean")
    if isinstance(v, (int, float)):
        return complex(float(v), 0.0)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
        return complex(float(v[0]), float(v[1]))
    raise ParseError(f"{where}: expected a number or [re, im]")


def _cjson(z):
    z = complex(z)
    return [z.real, z.imag]


def _need(doc, key, kind):
    if key not in doc:
        raise ParseError(f"{kind} descriptor needs '{key}'", key="kind")
    return doc[key]


def _int(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or float(v) != int(v):
        raise ParseError(f"{where}: expected an integer")
    return int(v)


def _gamma_field(doc, kind, required):
    g = doc.get("gamma")
    if g is None:
        if required:
            raise ParseError(f"{kind} descriptor needs 'gamma'")
        return None
    if isinstance(g, bool) or not isinstance(g, (int, float)) or not g > 0:
        raise ParseError(f"{kind}: gamma must be a positive number")
    return float(g)


def _normalize(doc):
    """Validate a decoded document and return its canonical form."""
    if not isinstance(doc, dict):
        raise ParseError("descriptor must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}", key="kind")
    if kind == "builtin":
        name = _need(doc, "name", kind)
        if name not in BUILTINS:
            raise ParseError(f"unknown builtin {name!r}; known: {', '.join(BUILTINS)}", key="name")
        params = doc.get("params", {}) or {}
        if not isinstance(params, dict):
            raise ParseError("builtin params must be an object")
        clean = {}
        for key, v in params.items():
            if key == "gamma":
                clean[key] = _gamma_field(params, name, True)
            elif key in BUILTINS[name]:
                clean[key] = _int(v, f"{name}.{key}")
            else:
                raise ParseError(f"builtin {name!r} takes no parameter {key!r}")
        for key in BUILTINS[name]:
            if key not in clean:
                raise ParseError(f"builtin {name!r} needs parameter {key!r}")
        return {"kind": kind, "name": name, "params": clean}
    if kind in ("gaussian_series", "power_series"):
        coeffs = _need(doc, "coeffs", kind)
        if not isinstance(coeffs, list) or not coeffs:
            raise ParseError(f"{kind}: coeffs must be a non-empty list", key="coeffs")
        c = [_cjson(_cnum(v, f"coeffs[{i}]")) for i, v in enumerate(coeffs)]
        if kind == "power_series":
            order = doc.get("order", len(c) - 1)
            return {"kind": kind, "coeffs": c, "order": _int(order, "order")}
        basis = doc.get("basis", "hermite2")
        if basis not in ("hermite2", "monomial"):
            raise ParseError("basis must be 'hermite2' or 'monomial'")
        return {"kind": kind, "basis": basis, "coeffs": c,
                "gamma": _gamma_field(doc, kind, False)}
    if kind == "lattice_table":
        gamma = _gamma_field(doc, kind, True)
        entries = _need(doc, "entries", kind)
        if not isinstance(entries, list):
            raise ParseError("lattice_table: entries must be a list of [sign, k, value]")
        out = []
        for i, e in enumerate(entries):
            if not isinstance(e, list) or len(e) != 3:
                raise ParseError(f"entries[{i}]: expected [sign, k, value]")
            s = _int(e[0], f"entries[{i}].sign")
            if s not in (1, -1):
                raise ParseError(f"entries[{i}]: sign must be 1 or -1")
            out.append([s, _int(e[1], f"entries[{i}].k"), _cjson(_cnum(e[2], f"entries[{i}].value"))])
        return {"kind": kind, "gamma": gamma, "entries": out}
    s = _int(_need(doc, "sign", kind), "sign")
    if s not in (1, -1):
        raise ParseError("delta: sign must be 1 or -1")
    return {"kind": kind, "sign": s, "p": _int(_need(doc, "p", kind), "p"),
            "gamma": _gamma_field(doc, kind, True)}


def _shorthand(text):
    name, _, rest = text.partition(":")
    params = {}
    col = len(name) + 2
    for part in filter(None, rest.split(",")):
        key, eq, val = part.partition("=")
        if not eq:
            raise ParseError(f"expected key=value, got {part!r}", 1, col)
        try:
            params[key.strip()] = float(val) if key.strip() == "gamma" else int(val)
        except ValueError:
            raise ParseError(f"bad value {val!r} for {key.strip()!r}", 1, col + len(key) + 1) from None
        col += len(part) + 1
    return {"kind": "builtin", "name": name.strip(), "params": params}


def parse_descriptor(text: str) -> dict:
    """Decode a JSON descriptor (or builtin shorthand) into canonical form."""
    s = text.strip()
    if not s.startswith("{"):
        if not s or not (s[0].isalpha() or s[0] == "_"):
            raise ParseError("expected a JSON object or a builtin name", 1, 1)
        return _normalize(_shorthand(s))
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    try:
        return _normalize(doc)
    except ParseError as exc:
        # point at the offending key when we can find it in the source
        key = exc.key
        if key is None:
            key = next((w for w in re.findall(r"[A-Za-z_]\w*", exc.msg) if f'"{w}"' in text), None)
        if key is None:
            raise
        raise ParseError(exc.msg, *_locate_key(text, key)) from None


def serialize_descriptor(d: dict, indent=None) -> str:
    # json writes floats with repr, which round-trips doubles exactly
    return json.dumps(_normalize(d), indent=indent)


def _read_arg(arg):
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read()
    return arg


def build(d: dict, ctx: QContext, gamma: float):
    """Turn a canonical descriptor into the library object it names."""
    kind = d["kind"]
    if kind == "gaussian_series":
        c = np.array([complex(*v) for v in d["coeffs"]])
        return GaussianSeries(c, d["basis"], ctx, d["gamma"] if d["gamma"] is not None else gamma)
    if kind == "power_series":
        return PowerSeries([complex(*v) for v in d["coeffs"]], d["order"])
    if kind == "lattice_table":
        table = {(s, k): complex(*v) for s, k, v in d["entries"]}
        return LatticeFunction(d["gamma"], table=table)
    if kind == "delta":
        return DiscreteDelta(d["sign"], d["p"], d["gamma"])
    p = d["params"]
    gam = p.get("gamma", gamma)
    name = d["name"]
    if name == "eq2_gaussian":
        return eq2_gaussian(ctx, gamma_hint=gam)
    if name == "Eq2_gaussian":
        return big_gaussian_function(ctx)
    if name == "g_m":
        return g_m(p["m"], ctx, gamma_hint=gam)
    if name == "G_k":
        return G_k(p["k"], gam, ctx)
    if name == "u":
        return unit_u(gam, ctx)
    if name == "hermite2_l":
        return hermite2_gaussian(p["l"], ctx, gamma_hint=gam)
    if name == "eq_exp_i":
        return exp_i_function(gam, ctx)
    if name == "cos_q":
        return cos_q(ctx, gamma_hint=gam)
    if name == "sin_q":
        return sin_q(ctx, gamma_hint=gam)
    return DiscreteDelta(p["sign"], p["p"], gam)


def _table_entries(fn, gamma, ctx):
    lo, hi = TABLE_WINDOW
    ks = np.arange(lo, hi + 1)
    out = []
    for s in (1, -1):
        vals = fn.values(np.full(ks.shape, s), ks, ctx) if isinstance(fn, LatticeFunction) else None
        if vals is None:
            vals = np.asarray(fn(s * ctx.q ** ks.astype(float) * gamma), dtype=complex)
        out += [[s, int(k), _cjson(v)] for k, v in zip(ks, vals) if v != 0]
    return out


def describe(obj, ctx: QContext, gamma: float) -> dict:
    """Descriptor for a result object; generic functions are tabulated on the window."""
    if isinstance(obj, GaussianSeries):
        return {"kind": "gaussian_series", "basis": "hermite2",
                "coeffs": [_cjson(v) for v in obj.hermite],
                "gamma": obj.gamma_hint if obj.gamma_hint is not None else gamma}
    if isinstance(obj, PowerSeries):
        return {"kind": "power_series", "coeffs": [_cjson(v) for v in obj.coeffs], "order": obj.order}
    if isinstance(obj, DiscreteDelta):
        return {"kind": "delta", "sign": obj.sign, "p": obj.p, "gamma": obj.gamma}
    gam = getattr(obj, "gamma", gamma)
    return {"kind": "lattice_table", "gamma": gam, "entries": _table_entries(obj, gam, ctx)}


def _evaluate(obj, x, ctx):
    if isinstance(obj, DiscreteDelta):
        obj = obj.as_function()
    if isinstance(obj, LatticeFunction):
        return np.asarray(obj.evaluate(np.asarray(x), ctx), dtype=complex).reshape(-1)
    return np.asarray(obj(np.asarray(x)), dtype=complex).reshape(-1)


# ----------------------------------------------------------------------------
# output


def _emit_table(columns, rows, fmt, out):
    if fmt == "json":
        json.dump({"columns": columns, "rows": rows}, out)
        out.write("\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    w.writerows([[repr(v) if isinstance(v, float) else v for v in r] for r in rows])


def _emit_json(doc, out):
    json.dump(doc, out, indent=2)
    out.write("\n")


def _report_dict(rep):
    out = {}
    for k, v in vars(rep).items():
        if isinstance(v, (GaussianSeries, PowerSeries)):
            continue
        if isinstance(v, float) and math.isinf(v):
            v = "inf"
        out[k] = v
    return out


# ----------------------------------------------------------------------------
# commands


def cmd_eval(args, ctx, out):
    obj = build(parse_descriptor(_read_arg(args.desc)), ctx, args.gamma)
    if args.points:
        xs = np.array(args.points, dtype=float)
    else:
        xs = lattice_window(getattr(obj, "gamma", args.gamma), -2, 6, ctx)
    vals = _evaluate(obj, xs, ctx)
    _emit_table(["x", "Re", "Im"], [[float(x), float(v.real), float(v.imag)] for x, v in zip(xs, vals)],
                args.format, out)
    return 0


def cmd_moments(args, ctx, out):
    obj = build(parse_descriptor(_read_arg(args.desc)), ctx, args.gamma)
    if isinstance(obj, DiscreteDelta):
        gam = obj.gamma
    else:
        gam = args.gamma if not isinstance(obj, LatticeFunction) else obj.gamma
    m = moments_any(obj, args.up_to, ctx, gam)
    _emit_table(["k", "Re", "Im"], [[k, float(complex(v).real), float(complex(v).imag)] for k, v in enumerate(m.moments)],
                args.format, out)
    return 0


def cmd_convolve(args, ctx, out):
    f = build(parse_descriptor(_read_arg(args.left)), ctx, args.gamma)
    g = build(parse_descriptor(_read_arg(args.right)), ctx, args.gamma)
    gam = getattr(f, "gamma", None) or args.gamma
    plan = plan_convolution(f, g, ctx)
    if plan.path == "moment_series" and args.moment_order:
        plan = ConvolutionPlan("moment_series", args.moment_order, 0)
    prod = convolve(f, g, ctx, gam, plan)
    _emit_json(describe(prod, ctx, gam), out)
    return 0


def cmd_fourier(args, ctx, out):
    obj = build(parse_descriptor(_read_arg(args.desc)), ctx, args.gamma)
    gam = getattr(obj, "gamma", None) or args.gamma
    img = (fourier_formal_prime if args.prime else fourier_formal)(obj, gam, ctx, ctx.order)
    _emit_json(describe(img.series, ctx, gam), out)
    return 0


def cmd_ifourier(args, ctx, out):
    d = parse_descriptor(_read_arg(args.desc))
    if d["kind"] != "power_series":
        raise ParseError("ifourier expects a power_series descriptor")
    phi = build(d, ctx, args.gamma)
    res = fourier_inverse_G(phi, args.gamma, ctx, ctx.order, check_radius=not args.no_radius_check)
    _emit_json(describe(res, ctx, args.gamma), out)
    return 0


def cmd_invert(args, ctx, out):
    obj = build(parse_descriptor(_read_arg(args.desc)), ctx, args.gamma)
    gam = getattr(obj, "gamma", None) or args.gamma
    rep = convolution_inverse_report(obj, ctx, gam, ctx.order)
    _emit_json({"descriptor": describe(rep.inverse, ctx, gam),
                "report": {"rho": rep.rho if math.isfinite(rep.rho) else "inf", "strong": rep.strong}},
               out)
    return 0


def _operator(text):
    try:
        c = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(c, list) or not c:
        raise ParseError("operator must be a non-empty JSON list of coefficients")
    return QDiffOperator([_cnum(v, f"operator[{i}]") for i, v in enumerate(c)])


def cmd_solve(args, ctx, out):
    L = _operator(_read_arg(args.operator))
    F = build(parse_descriptor(_read_arg(args.rhs)), ctx, args.gamma)
    rep = solve(L, F, args.gamma, ctx, ctx.order)
    _emit_json({"descriptor": describe(rep.solution, ctx, args.gamma), "report": _report_dict(rep)}, out)
    return 0


def cmd_check(args, ctx, out):
    if args.list:
        for name in checks.CHECKS:
            out.write(name + "\n")
        return 0
    names = args.names or list(checks.CHECKS)
    ok = True
    results = []
    for name in names:
        if name not in checks.CHECKS:
            raise ParseError(f"unknown check {name!r}; use --list")
        r = checks.run_check(name, ctx, args.gamma)
        ok &= bool(r.passed)
        results.append(r)
        if args.format == "csv":
            out.write(r.line() + "\n")
    if args.format == "json":
        _emit_json([{"name": r.name, "passed": r.passed, "measured": r.measured, "tol": r.tol,
                     "detail": {k: repr(v) for k, v in r.detail.items()}} for r in results], out)
    return 0 if ok else 1


def _parser():
    p = argparse.ArgumentParser(prog="qconv", description="q-convolution toolkit")
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--gamma", type=float, default=0.9)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-terms", type=int, default=512)
    p.add_argument("--order", type=int, default=32)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", help="evaluate a function at points")
    s.add_argument("desc")
    s.add_argument("points", nargs="*", type=float)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("moments", help="moments mu_0..mu_N")
    s.add_argument("desc")
    s.add_argument("up_to", type=int)
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("convolve", help="f * g")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--moment-order", type=int, default=None)
    s.set_defaults(func=cmd_convolve)

    s = sub.add_parser("fourier", help="formal Fourier transform (power series in y)")
    s.add_argument("desc")
    s.add_argument("--prime", action="store_true", help="the twisted variant")
    s.set_defaults(func=cmd_fourier)

    s = sub.add_parser("ifourier", help="inverse transform of a power series")
    s.add_argument("desc")
    s.add_argument("--no-radius-check", action="store_true")
    s.set_defaults(func=cmd_ifourier)

    s = sub.add_parser("invert", help="convolution inverse")
    s.add_argument("desc")
    s.set_defaults(func=cmd_invert)

    s = sub.add_parser("solve", help="solve sum c_n d^n Y = F")
    s.add_argument("operator", help="JSON list [c_0, c_1, ...]")
    s.add_argument("rhs")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("check", help="run named identity checks")
    s.add_argument("names", nargs="*")
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_check)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = _parser().parse_args(argv)
    try:
        ctx = QContext(args.q, rel_tol=args.tol, max_terms=args.max_terms, order=args.order)
        return args.func(args, ctx, out)
    except ParseError as exc:
        print(f"ParseError: {exc}", file=sys.stderr)
        return 2
    except (QConvError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
