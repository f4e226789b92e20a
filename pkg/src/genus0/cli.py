"""Command line front end.

Systems come either from the built-in corpus (``--builtin br --a 1``) or
from a map file in TOML layout::

    [map]
    fx = "y"
    fy = "(b*y+x*y)/(y+b)"

    [inverse]            # optional
    fx = "y*(x+b)/x-b"
    fy = "x"

    [integral]
    num = "y*(x+b)"
    den = "1"

    [params]             # literal value, or "symbolic"
    b = "symbolic"

    [parametrization]    # optional, in t and h
    p1 = "t"
    p2 = "h/(t+b)"
    pinv = "x"

    [options]            # optional
    name = "pal5"
    h_grid = ["1", "2"]
    h_range = ["0", "1"]
    base_x = "1"
    method = "family"

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 parse error.
"""

from __future__ import annotations

import argparse
import sys as _sys
from fractions import Fraction
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import builtins as _bi
from .exact import RatFunc, gens_of
from .fibered_dynamics import (
    FiberError,
    FiberFamily,
    IntegrableSystem,
    RationalMapPlane,
    analyze_fiber,
    analyze_fibers,
    build_conjugation,
    lie_symmetry_field,
    measure_density,
    period_bound,
    rotation_profile,
    solve_period_level,
    suggest_level_correspondence,
    verify_first_integral,
    verify_lie_compatibility,
    verify_measure,
)
from .mobius import Mobius, MobiusError, classify, solve_conjugator
from .orbits import (
    detect_period,
    estimate_rotation_number,
    fiber_point,
    iterate,
    orbit_csv,
    verify_fiber_prediction,
)
from .parser import ParseError, parse_expression, parse_scalar
from .serialize import dumps, expr_str, float_str, scalar_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3

_VARS = ("x", "y", "t", "h")
_SYMBOLIC = ("", "symbolic", "free")

# levels sampled by `verify` for the fiber predictions
VERIFY_LEVELS = {
    "br": ({"a": 1}, ["3", "2", "3/2"]),
    "saito": ({}, ["1/2", "-1", "3"]),
    "nostra": ({}, ["1", "-1/4"]),
    "pal1": ({"b": 1}, ["3", "1/2"]),
    "pal2": ({"b": 1}, ["3", "1/2"]),
    "pal3": ({"b": 1}, ["1/2", "3"]),
    "pal4": ({"b": 1}, ["1/2", "3"]),
    "pal5": ({"b": 1}, ["1/2", "3"]),
    "pal6": ({"b": 1}, ["1/2", "3"]),
}


class UsageError(Exception):
    pass


class SpecError(Exception):
    """Malformed map file (bad layout, not a bad expression)."""


# ---------------------------------------------------------------------------
# map files


def _text(v) -> str:
    if isinstance(v, bool):
        raise SpecError(f"expected an expression, got {v!r}")
    if isinstance(v, (int, float)):
        return str(v)
    if not isinstance(v, str):
        raise SpecError(f"expected an expression string, got {v!r}")
    return v


def _scalar(v):
    if isinstance(v, bool):
        raise SpecError(f"expected a number, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(repr(v))
    return parse_scalar(_text(v))


def load_spec(path, overrides: dict | None = None):
    """(IntegrableSystem, options) from a map file.

    ``overrides`` replaces parameter values from the file; None entries are
    ignored.
    """
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"missing spec file: {path}")
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ParseError(f"{path}: {exc}", getattr(exc, "lineno", 1) or 1, getattr(exc, "colno", 1) or 1)
    return system_from_dict(data, overrides, name=path.stem)


def system_from_dict(data: dict, overrides: dict | None = None, name: str = "map"):
    for key in ("map", "integral"):
        if key not in data:
            raise SpecError(f"missing [{key}] section")
    params = data.get("params", {})
    options = dict(data.get("options", {}))
    bad = set(params) & set(_VARS)
    if bad:
        raise SpecError(f"parameter names clash with variables: {sorted(bad)}")
    syms = {p: None for p in params}

    def pe(src):
        return parse_expression(_text(src), syms, _VARS)

    def section(key, fields):
        sec = data[key]
        missing = [f for f in fields if f not in sec]
        if missing:
            raise SpecError(f"[{key}] lacks {', '.join(missing)}")
        return [pe(sec[f]) for f in fields]

    fx, fy = section("map", ("fx", "fy"))
    inverse = tuple(section("inverse", ("fx", "fy"))) if "inverse" in data else None
    for e in (fx, fy) + (inverse or ()):
        if {"t", "h"} & gens_of(e):
            raise SpecError("map components may only use x, y and parameters")
    integral = data["integral"]
    V = pe(integral.get("num", "")) / pe(integral.get("den", "1"))
    family = None
    if "parametrization" in data:
        par = data["parametrization"]
        p1, p2 = section("parametrization", ("p1", "p2"))
        pinv = pe(par["pinv"]) if "pinv" in par else None
        family = FiberFamily(p1, p2, pinv)
    h_range = None
    if "h_range" in options:
        lo, hi = options["h_range"]
        h_range = (_const(pe(lo)), _const(pe(hi)))
    base_x = _const(pe(options["base_x"])) if "base_x" in options else None
    sysobj = IntegrableSystem(
        str(options.get("name", name)),
        RationalMapPlane(fx, fy, inverse, dict(syms)),
        V,
        family,
        dict(syms),
        h_range,
        base_x,
    )
    values = {}
    for p, v in params.items():
        if isinstance(v, str) and v.strip().lower() in _SYMBOLIC:
            continue
        values[p] = _scalar(v)
    for p, v in (overrides or {}).items():
        if v is None:
            continue
        if p not in syms:
            raise UsageError(f"map file declares no parameter {p!r}")
        values[p] = v
    if values:
        sysobj = sysobj.specialize(**values)
    return sysobj, options


def _const(e):
    return e.constant_value() if isinstance(e, RatFunc) and e.is_constant() else e


def load_system(source: str, a=None, b=None):
    """A built-in name or a map-file path; returns (system, options)."""
    overrides = {"a": a, "b": b}
    if source.lower() in _bi.BUILTIN_NAMES and not Path(source).is_file():
        params = _bi.builtin_params(source)
        for k, v in overrides.items():
            if v is not None and k not in params:
                raise UsageError(f"builtin {source} has no parameter {k!r}")
        return _bi.builtin(source, **{k: v for k, v in overrides.items() if k in params}), {}
    return load_spec(source, overrides)


# ---------------------------------------------------------------------------
# argument helpers


def _levels(text) -> list:
    if text is None:
        return []
    if isinstance(text, list):
        return [_scalar(v) for v in text]
    return [parse_scalar(s) for s in text.split(",") if s.strip()]


def _system_from_args(args):
    if args.builtin and args.spec:
        raise UsageError("--builtin and --spec are mutually exclusive")
    if not args.builtin and not args.spec:
        raise UsageError("one of --builtin or --spec is required")
    return load_system(args.builtin or args.spec, args.a, args.b)


def _method(args, sysobj, options):
    m = getattr(args, "method", None) or options.get("method")
    if m:
        return m
    return "family" if sysobj.family is not None else "lines"


def _params_json(sysobj) -> dict:
    return {k: ("symbolic" if v is None else scalar_json(v)) for k, v in sorted(sysobj.params.items())}


def _mobius_json(m: Mobius) -> dict:
    return {"expr": expr_str(m.to_ratfunc("t")), "entries": [scalar_json(e) for e in m.entries]}


def _emit(report: dict, args) -> None:
    text = dumps(report)
    if args.out:
        Path(args.out).write_text(text)
    elif getattr(args, "json", False):
        _sys.stdout.write(text)


def _say(*parts) -> None:
    print(*parts)


# ---------------------------------------------------------------------------
# invariant suite


def invariant_checks(sysobj) -> tuple:
    """(checks, results) for first integral, Mobius degree, Lie symmetry and measure."""
    checks, res = {}, {}
    checks["first_integral"] = verify_first_integral(sysobj)
    if sysobj.map.inverse is not None:
        checks["inverse"] = sysobj.map.inverse_verified()
    M = sysobj.symbolic_mobius()
    checks["mobius_degree_one"] = M is not None
    if M is None:
        return checks, res
    res["mobius"] = _mobius_json(M)
    try:
        X = lie_symmetry_field(sysobj)
    except FiberError as exc:
        checks["lie_symmetry"] = False
        res["lie_error"] = str(exc)
        return checks, res
    res["X"] = [expr_str(X.X1), expr_str(X.X2)]
    checks["lie_compatibility"] = verify_lie_compatibility(X, sysobj.map, "symbolic")
    checks["lie_compatibility_sampled"] = verify_lie_compatibility(X, sysobj.map, "sampled")
    try:
        mu = measure_density(X, sysobj)
        res["mu"] = expr_str(mu)
        checks["measure"] = verify_measure(mu, sysobj.map)
    except FiberError as exc:
        checks["measure"] = False
        res["mu_error"] = str(exc)
    return checks, res


def _check_lines(checks: dict) -> None:
    for k, v in checks.items():
        _say(f"  {k}: {'ok' if v else 'FAILED'}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(args) -> int:
    sysobj, options = _system_from_args(args)
    hs = _levels(args.h_grid) if args.h_grid is not None else _levels(options.get("h_grid"))
    method = _method(args, sysobj, options)
    reports = analyze_fibers(sysobj, hs, method)
    fibers, ok = [], True
    for rep in reports:
        d = rep.to_dict()
        if args.predict and rep.mclass is not None:
            v = verify_fiber_prediction(rep, sysobj, trials=args.trials, steps=args.steps)
            d["prediction"] = {"ok": v.ok, "kind": v.kind, "failures": v.failures}
            rep.verdicts["prediction"] = v.ok
            d["verdicts"]["prediction"] = v.ok
        ok &= all(rep.verdicts.values())
        fibers.append(d)
        extra = "" if rep.kind is None else f" {rep.kind}"
        if rep.theta is not None:
            extra += f" theta={float_str(rep.theta)}"
        if rep.period is not None:
            extra += f" period={rep.period}"
        _say(f"h = {expr_str(rep.h)}: {rep.status}{extra}")
    report = {
        "command": "analyze",
        "system": sysobj.name,
        "params": _params_json(sysobj),
        "method": method,
        "fibers": fibers,
        "summary": {"fibers": len(fibers), "ok": ok},
    }
    if args.symbolic:
        checks, res = invariant_checks(sysobj)
        report["symbolic"] = {**res, "checks": checks}
        ok &= all(checks.values())
        report["summary"]["ok"] = ok
    _emit(report, args)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_symmetry(args) -> int:
    sysobj, _ = _system_from_args(args)
    checks, res = invariant_checks(sysobj)
    if "X" in res:
        _say(f"X1 = {res['X'][0]}")
        _say(f"X2 = {res['X'][1]}")
    if "mu" in res:
        _say(f"mu = {res['mu']}")
    _check_lines(checks)
    ok = all(checks.values())
    _emit({"command": "symmetry", "system": sysobj.name, "params": _params_json(sysobj),
           **res, "checks": checks, "ok": ok}, args)
    return EXIT_OK if ok else EXIT_FAIL


def _class_json(cls) -> dict:
    d = {"class": cls.kind, "delta": scalar_json(cls.delta), "xi": scalar_json(cls.xi),
         "fixed_parameters": [scalar_json(t) for t in cls.fixed_points]}
    if cls.kind == "rotation":
        d["theta"] = scalar_json(cls.theta)
        d["period"] = cls.order
    if cls.kind == "parabolic":
        d["kappa"] = scalar_json(cls.kappa)
    return d


def cmd_mobius(args) -> int:
    sysobj, options = _system_from_args(args)
    report = {"command": "mobius", "system": sysobj.name, "params": _params_json(sysobj)}
    if args.h is None:
        M = sysobj.symbolic_mobius()
        if M is None:
            _say("no symbolic Mobius map (closed-form fiber family missing or not proper)")
            return EXIT_FAIL
        _say(f"M_h(t) = {M}")
        report["mobius"] = _mobius_json(M)
    else:
        h = parse_scalar(args.h)
        M = sysobj.mobius_at(h, _method(args, sysobj, options))
        _say(f"M(t) = {M}")
        report["h"] = scalar_json(h)
        report["mobius"] = _mobius_json(M)
        if M.is_identity():
            report["class"] = "identity"
            _say("class: identity")
        else:
            cls = classify(M)
            report.update(_class_json(cls))
            line = f"class: {cls.kind}"
            if cls.theta is not None:
                line += f", theta = {float_str(cls.theta)}"
            if cls.order is not None:
                line += f", period {cls.order}"
            _say(line)
            _say("fixed parameters: " + ", ".join(expr_str(t) for t in cls.fixed_points))
    _emit(report, args)
    return EXIT_OK


def cmd_orbit(args) -> int:
    sysobj, _ = _system_from_args(args)
    if (args.x0 is None) != (args.y0 is None):
        raise UsageError("--x0 and --y0 go together")
    if args.x0 is None and args.h is None:
        raise UsageError("give a start point (--x0 --y0) or a fiber (--h, --t)")
    if args.x0 is not None and args.h is not None:
        raise UsageError("--x0/--y0 conflict with --h/--t")
    if args.float:
        if args.x0 is not None:
            p0 = (float(args.x0), float(args.y0))
        else:
            p0 = fiber_point(sysobj, float(args.h), float(args.t))
    elif args.x0 is not None:
        p0 = (parse_scalar(args.x0), parse_scalar(args.y0))
    else:
        p0 = fiber_point(sysobj, parse_scalar(args.h), parse_scalar(args.t))
    orbit = iterate(sysobj.map, p0, args.n, stop_on_return=args.stop_on_return)
    period = orbit.period or detect_period(orbit)
    _say(f"{orbit.mode} orbit: {orbit.steps} steps, status {orbit.status}"
         + (f" at step {orbit.stop}" if orbit.stop is not None else ""))
    if period is not None:
        _say(f"period {period}")
    if args.csv:
        Path(args.csv).write_text(orbit_csv(orbit))
    last = orbit.points[-1]
    _emit({"command": "orbit", "system": sysobj.name, "params": _params_json(sysobj),
           "mode": orbit.mode, "start": [scalar_json(v) for v in orbit.p0],
           "steps": orbit.steps, "status": orbit.status, "stop": orbit.stop, "period": period,
           "last": [scalar_json(v) for v in last]}, args)
    return EXIT_OK


def cmd_rotation(args) -> int:
    sysobj, options = _system_from_args(args)
    hs = _levels(args.h_grid) if args.h_grid is not None else _levels(options.get("h_grid"))
    rows = []
    for h, th in rotation_profile(sysobj, hs):
        row = {"h": scalar_json(h), "theta": None if th is None else scalar_json(th)}
        line = f"h = {expr_str(h)}: " + ("not a rotation" if th is None else f"theta = {float_str(th)}")
        if args.estimate and th is not None:
            p0 = fiber_point(sysobj, float(h), 0.5)
            est = estimate_rotation_number(sysobj, p0, args.estimate, h=h)
            row["estimate"] = scalar_json(est)
            line += f", orbit estimate {float_str(est)}"
        rows.append(row)
        _say(line)
    _emit({"command": "rotation", "system": sysobj.name, "params": _params_json(sysobj),
           "profile": rows}, args)
    return EXIT_OK


def cmd_periods(args) -> int:
    sysobj, _ = _system_from_args(args)
    if args.p < 1:
        raise UsageError("--p must be positive")
    target = Fraction(args.q, args.p)
    report = {"command": "periods", "system": sysobj.name, "params": _params_json(sysobj),
              "p": args.p, "q": args.q}
    h = solve_period_level(sysobj, target)
    ok = True
    if h is None:
        _say(f"theta = {target} is not attained on the admissible interval")
        report["h"] = None
        ok = False
    else:
        _say(f"theta(h) = {target} at h = {h:.6f}")
        report["h"] = scalar_json(h)
        p0 = fiber_point(sysobj, h, 0.5)
        orbit = iterate(sysobj.map, p0, 3 * args.p + 3, mode="float")
        per = detect_period(orbit)
        report["orbit_period"] = per
        _say(f"float orbit period: {per}")
        ok = per is not None and args.p % per == 0
    try:
        theta_a, p_min = period_bound(sysobj)
        report["theta_a"] = scalar_json(theta_a)
        report["bound"] = p_min
        _say(f"theta_a = {theta_a}; periods p >= {p_min}")
    except (FiberError, MobiusError) as exc:
        report["bound"] = None
        _say(f"no period bound: {exc}")
    report["ok"] = ok
    _emit(report, args)
    return EXIT_OK if ok else EXIT_FAIL


def _expr_in(src: str, sysobj, variables):
    syms = {k: v for k, v in sysobj.params.items()}
    return parse_expression(src, syms, variables)


def cmd_conjugate(args) -> int:
    if args.auto and (args.level or args.m):
        raise UsageError("--auto conflicts with --level/--m")
    if not args.auto and not (args.level and args.m):
        raise UsageError("give --level and --m, or --auto")
    sysF, _ = load_system(args.f, args.a, args.b)
    sysG, _ = load_system(args.g, args.a, args.b)
    report = {"command": "conjugate", "f": sysF.name, "g": sysG.name,
              "params": _params_json(sysF)}
    if args.auto:
        f = suggest_level_correspondence(sysF, sysG)
        if f is None:
            _say("no level correspondence: the conjugacy invariants do not match")
            report.update(found=False, ok=False)
            _emit(report, args)
            return EXIT_FAIL
        M, N = sysF.symbolic_mobius(), sysG.symbolic_mobius()
        m = solve_conjugator(M, N.subs({"h": f}))
        if m is None:
            _say(f"f(h) = {expr_str(f)} found, but no Mobius conjugator")
            report.update(found=False, ok=False, level=expr_str(f))
            _emit(report, args)
            return EXIT_FAIL
    else:
        f = _expr_in(args.level, sysF, ("h",))
        m = Mobius.from_ratfunc(_expr_in(args.m, sysF, ("t", "h")), "t")
    res = build_conjugation(sysF, sysG, f, m)
    _say(f"f(h) = {expr_str(res.f)}" + (" found" if args.auto else ""))
    _say(f"m_h(t) = {expr_str(res.m.to_ratfunc('t'))}")
    _say(f"Psi = ({expr_str(res.psi[0])}, {expr_str(res.psi[1])})")
    _say(f"Psi^-1 = ({expr_str(res.psi_inv[0])}, {expr_str(res.psi_inv[1])})")
    _say("verified" if res.ok else res.diagnostic())
    report.update(
        found=True,
        level=expr_str(res.f),
        level_inverse=expr_str(res.f_inv),
        m=expr_str(res.m.to_ratfunc("t")),
        psi=[expr_str(c) for c in res.psi],
        psi_inv=[expr_str(c) for c in res.psi_inv],
        checks=dict(res.checks),
        ok=res.ok,
    )
    _emit(report, args)
    return EXIT_OK if res.ok else EXIT_FAIL


def verify_builtin(name: str, a=None, b=None) -> dict:
    sysobj = _bi.builtin(name)
    checks, res = invariant_checks(sysobj)
    params, levels = VERIFY_LEVELS[name]
    params = dict(params)
    if a is not None and "a" in params:
        params["a"] = a
    if b is not None and "b" in params:
        params["b"] = b
    sp = sysobj.specialize(**params) if params else sysobj
    fibers = []
    for h in _levels(",".join(levels)):
        rep = analyze_fiber(sp, h)
        v = verify_fiber_prediction(rep, sp)
        ok = v.ok and all(rep.verdicts.values())
        checks[f"fiber h={h}"] = ok
        fibers.append({"h": scalar_json(h), "class": rep.kind, "ok": ok, "failures": v.failures})
    return {"checks": checks, **res, "fibers": fibers, "fiber_params": _params_json(sp)}


def cmd_verify(args) -> int:
    names = [args.builtin] if args.builtin else list(_bi.BUILTIN_NAMES)
    out, ok = {}, True
    for name in names:
        r = verify_builtin(name.lower(), args.a, args.b)
        good = all(r["checks"].values())
        ok &= good
        _say(f"{name}: {'ok' if good else 'FAILED'}")
        if not good or args.verbose:
            _check_lines(r["checks"])
        out[name] = r
    _emit({"command": "verify", "systems": out, "ok": ok}, args)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing


def _scalar_arg(s: str):
    try:
        return parse_scalar(s)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="genus0", description="Integrable planar maps with genus 0 fibers.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, source=True):
        if source:
            p.add_argument("--builtin", help="one of " + ", ".join(_bi.BUILTIN_NAMES))
            p.add_argument("--spec", help="map file (TOML)")
        p.add_argument("--a", type=_scalar_arg, help="value of parameter a")
        p.add_argument("--b", type=_scalar_arg, help="value of parameter b")
        p.add_argument("--out", help="write the JSON report here")
        p.add_argument("--json", action="store_true", help="print the JSON report")
        return p

    p = common(sub.add_parser("analyze", help="analyze fibers over an h-grid"))
    p.add_argument("--h-grid", help="comma-separated levels")
    p.add_argument("--method", choices=("family", "lines"))
    p.add_argument("--predict", action="store_true", help="check predictions on sampled orbits")
    p.add_argument("--symbolic", action="store_true", help="include X, mu and M_h")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--steps", type=int, default=1000)
    p.set_defaults(func=cmd_analyze)

    p = common(sub.add_parser("symmetry", help="Lie symmetry, measure and their checks"))
    p.set_defaults(func=cmd_symmetry)

    p = common(sub.add_parser("mobius", help="M_h and its classification"))
    p.add_argument("--h", help="level; omit for the symbolic map")
    p.add_argument("--method", choices=("family", "lines"))
    p.set_defaults(func=cmd_mobius)

    p = common(sub.add_parser("orbit", help="iterate the map"))
    p.add_argument("--x0")
    p.add_argument("--y0")
    p.add_argument("--h", help="start on this fiber")
    p.add_argument("--t", default="1/2", help="fiber parameter of the start")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--float", action="store_true")
    p.add_argument("--stop-on-return", action="store_true")
    p.add_argument("--csv", help="write the orbit as CSV")
    p.set_defaults(func=cmd_orbit)

    p = common(sub.add_parser("rotation", help="rotation number profile"))
    p.add_argument("--h-grid", help="comma-separated levels")
    p.add_argument("--estimate", type=int, default=0, metavar="N",
                   help="also estimate from an N-step float orbit")
    p.set_defaults(func=cmd_rotation)

    p = common(sub.add_parser("periods", help="level with rotation number q/p"))
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_periods)

    p = common(sub.add_parser("conjugate", help="conjugation between two systems"), source=False)
    p.add_argument("--f", required=True, help="map file or builtin name")
    p.add_argument("--g", required=True, help="map file or builtin name")
    p.add_argument("--level", help="level correspondence k = f(h)")
    p.add_argument("--m", help="Mobius family m_h(t)")
    p.add_argument("--auto", action="store_true", help="derive f and m")
    p.set_defaults(func=cmd_conjugate)

    p = common(sub.add_parser("verify", help="invariant suite on the built-ins"), source=False)
    p.add_argument("--builtin", choices=_bi.BUILTIN_NAMES)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=_sys.stderr)
        return EXIT_PARSE
    except (UsageError, SpecError, KeyError) as exc:
        print(f"usage error: {exc}", file=_sys.stderr)
        return EXIT_USAGE
    except (FiberError, MobiusError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    _sys.exit(main())
