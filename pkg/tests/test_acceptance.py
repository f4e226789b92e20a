"""Acceptance criteria 1-11, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

import cmath
import contextlib
import io
import math
import random
from fractions import Fraction

import pytest

from genus0.builtins import BR_CLOSED_INVERSE, BUILTIN_NAMES, builtin
from genus0.cli import main
from genus0.curves import agree_on_curve, check_proper, conic_base_point, invert_parametrization, parametrize_by_lines
from genus0.exact import compose, quad
from genus0.fibered_dynamics import (
    analyze_fiber,
    build_conjugation,
    extract_mobius,
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
from genus0.mobius import INFINITY, Mobius, classify, conjugacy_invariant
from genus0.orbits import (
    conserves,
    detect_period,
    estimate_rotation_number,
    fiber_point,
    iterate,
    shadowing_holds,
    verify_fiber_prediction,
)
from genus0.parser import ParseError, parse_expression
from genus0.serialize import expr_str

from conftest import rf
from reference_data import CONJUGATIONS, FIELDS, MEASURES, MOBIUS

F = Fraction
RESULTS = {}


def report(n, title, failures):
    ok = not failures
    line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {title}"
    if failures:
        line += " -- " + "; ".join(failures[:5])
    RESULTS[n] = ok
    print(line)
    return ok


def check(failures, cond, msg):
    if not cond:
        failures.append(msg)


# 1


def criterion_1():
    fails = []
    for name in BUILTIN_NAMES:
        check(fails, verify_first_integral(builtin(name)) is True, f"{name}: V o F != V")
    return report(1, "first integrals, all built-ins, symbolic", fails)


# 2


def criterion_2():
    fails = []
    for name in BUILTIN_NAMES:
        M = builtin(name).symbolic_mobius()
        want = Mobius.from_ratfunc(rf(MOBIUS[name]))
        check(fails, M is not None and M == want, f"{name}: M_h = {M}")
    return report(2, "Mobius extraction equals the closed forms, symbolic in h and b", fails)


# 3


def criterion_3():
    fails = []
    br = builtin("br", a=1)
    for h in (F(3, 2), F(7, 4), F(3)):
        curve = br.curve(h)
        base = conic_base_point(curve, F(1))
        P = parametrize_by_lines(curve, base)
        check(fails, P.on_curve(curve), f"h={h}: P not on curve")
        check(fails, P.degree() == 2 == max(curve.deg_x, curve.deg_y) and check_proper(P, curve),
              f"h={h}: not proper")
        Q = invert_parametrization(P, curve)
        closed = rf(BR_CLOSED_INVERSE, a=F(1), h=h)
        check(fails, agree_on_curve(Q, closed, curve), f"h={h}: inverse differs on the curve")
        P.inverse = Q
        m = extract_mobius(br, P)
        check(fails, conjugacy_invariant(m) == h + 2, f"h={h}: invariant {conjugacy_invariant(m)}")
    return report(3, "BR a=1 lines pipeline at h = 3/2, 7/4, 3", fails)


# 4


def criterion_4():
    fails = []
    for name in BUILTIN_NAMES:
        s = builtin(name)
        X = lie_symmetry_field(s)
        if name in FIELDS:
            want = tuple(rf(c) for c in FIELDS[name])
            check(fails, (X.X1, X.X2) == want, f"{name}: X = {X}")
        check(fails, verify_lie_compatibility(X, s.map, "symbolic"), f"{name}: X o F != DF X")
    return report(4, "Lie symmetries reproduced and compatible", fails)


# 5


def criterion_5():
    fails = []
    for name in BUILTIN_NAMES:
        s = builtin(name)
        mu = measure_density(lie_symmetry_field(s), s)
        if name in MEASURES:
            check(fails, mu == rf(MEASURES[name]), f"{name}: mu = {mu}")
        check(fails, verify_measure(mu, s.map), f"{name}: mu o F != det(DF) mu")
    return report(5, "measure densities and mu o F = det(DF) mu", fails)


# 6


def criterion_6():
    fails = []
    br = builtin("br", a=1)
    r = analyze_fiber(br, 3)
    ts = {fp.t for fp in r.fixed_points}
    check(fails, r.kind == "hyperbolic", "BR h=3 not hyperbolic")
    check(fails, ts == {quad(F(3, 2), F(1, 2), 5), quad(F(3, 2), F(-1, 2), 5)}, f"BR h=3 parameters {ts}")
    check(fails, all(fp.at_infinity for fp in r.fixed_points), "BR h=3 fixed points not at infinity")
    r = analyze_fiber(br, 2)
    check(fails, r.kind == "parabolic" and r.mclass.t0 == 1, "BR h=2 not parabolic at t=1")
    h = 1.5
    expect = (cmath.phase((h - 1j * math.sqrt(4 - h * h)) / 2) / (2 * math.pi)) % 1
    r = analyze_fiber(br, F(3, 2))
    check(fails, r.kind == "rotation" and abs(r.theta - expect) < 1e-12, f"BR h=3/2 theta {r.theta}")
    r = analyze_fiber(builtin("nostra"), F(-1, 4))
    check(fails, r.kind == "parabolic", "nostra h=-1/4 not parabolic")
    check(fails, r.fixed_points and r.fixed_points[0].point == (F(-1, 2), F(-1, 2)),
          "nostra h=-1/4 fixed point")
    return report(6, "classification of BR and nostra fibers", fails)


# 7


def criterion_7():
    fails = []
    br = builtin("br", a=1)
    for h in (F(11, 10), F(3, 2), F(19, 10)):
        (_, th), = rotation_profile(br, [h])
        est = estimate_rotation_number(br, fiber_point(br, float(h), 0.5), 10_000, h=h)
        check(fails, abs(est - th) < 1e-6, f"h={h}: {est} vs {th}")
    return report(7, "orbit rotation estimates within 1e-6 of the profile", fails)


# 8


def criterion_8():
    fails = []
    br = builtin("br", a=1)
    h = solve_period_level(br, F(6, 7))
    check(fails, h is not None and abs(h - 2 * math.cos(12 * math.pi / 7)) < 1e-9, f"h = {h}")
    if h is not None:
        o = iterate(br.map, fiber_point(br, h, 0.5), 30, mode="float")
        check(fails, detect_period(o, 1e-8) == 7, f"float period {detect_period(o, 1e-8)}")
    theta_a, bound = period_bound(br)
    check(fails, theta_a == F(5, 6) and bound == 7, f"bound {bound} from theta_a {theta_a}")
    s = builtin("saito")
    w = quad(F(-1, 2), F(1, 2), -3)
    M = s.mobius_at(w)
    check(fails, (M @ M @ M).is_identity() and not M.is_identity(), "M^3 != id at the cube root")
    o = iterate(s.map, fiber_point(s, w, F(1)), 9)
    check(fails, detect_period(o) == 3, f"cube root orbit period {detect_period(o)}")
    o = iterate(s.map, fiber_point(s, F(-1), F(2)), 6)
    check(fails, detect_period(o) == 2, f"h=-1 orbit period {detect_period(o)}")
    return report(8, "period level, float period 7, bound p >= 7, Saito exact periods 3 and 2", fails)


# 9


def criterion_9():
    fails = []
    for Fn, Gn, f, m, psi, psi_inv in CONJUGATIONS:
        res = build_conjugation(builtin(Fn), builtin(Gn), rf(f), Mobius.from_ratfunc(rf(m)))
        for key in ("psi_inv o psi = id", "psi o F = G o psi", "V_G o psi = f o V_F"):
            check(fails, res.checks.get(key) is True, f"{Fn}->{Gn}: {key}")
        check(fails, res.psi == tuple(rf(c) for c in psi), f"{Fn}->{Gn}: psi {res.psi}")
    sugg = suggest_level_correspondence
    check(fails, sugg(builtin("pal1", b=1), builtin("pal2", b=1)) == rf("-(1-h)/h"), "F1/F2 level")
    check(fails, sugg(builtin("pal6", b=1), builtin("pal5", b=1)) == rf("h"), "F6/F5 level")
    check(fails, sugg(builtin("pal5", b=1), builtin("pal3", b=1)) is None, "F5/F3 should have none")
    return report(9, "four conjugations with symbolic b, level correspondences", fails)


# 10


def criterion_10():
    fails = []
    cases = [
        ("nostra", {}, F(1), (quad(F(-1, 2), F(1, 2), 5),) * 2),
        ("pal3", {"b": 1}, F(1, 2), (F(-2), F(-2))),
        ("saito", {}, F(1, 2), (0, F(1, 2))),
        ("saito", {}, F(-1, 2), (0, F(-1, 2))),
        ("saito", {}, quad(0, F(1, 2), -1), (0, quad(0, F(1, 2), -1))),
    ]
    for name, vals, h, attractor in cases:
        s = builtin(name, **vals)
        rep = analyze_fiber(s, h)
        check(fails, rep.fixed_points and rep.fixed_points[0].point == attractor, f"{name} h={h}: attractor")
        v = verify_fiber_prediction(rep, s, trials=20, steps=1000, tol=1e-8)
        check(fails, v.ok and v.details.get("starts") == 20, f"{name} h={h}: {v.failures[:2]}")
    return report(10, "attractors reached within 1e-8 in 1000 steps from 20 starts", fails)


# 11


_ATOMS = ["x", "y", "h", "a", "b", "1", "2", "-3", "1/2", "sqrt(5)", "sqrt(-3)"]


def _random_expr(rng, depth=3):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(_ATOMS)
    op = rng.choice("+-*/^")
    left = _random_expr(rng, depth - 1)
    if op == "^":
        return f"({left})^{rng.randint(0, 3)}"
    return f"({left}){op}({_random_expr(rng, depth - 1)})"


def criterion_11(tmp_dir):
    fails = []
    rng = random.Random(11)
    # exact-mode V conservation
    for name in BUILTIN_NAMES:
        s = builtin(name, **({"a": 1} if name == "br" else {"b": 1} if name.startswith("pal") else {}))
        for _ in range(50):
            p0 = (F(rng.randint(1, 30), rng.randint(1, 7)), F(rng.randint(1, 30), rng.randint(1, 7)))
            o = iterate(s.map, p0, 5)
            if not conserves(o, s.V):
                fails.append(f"{name}: V not conserved from {p0}")
                break
    # Mobius shadowing square
    for name, vals, h in (("saito", {}, F(3)), ("nostra", {}, F(2)), ("pal1", {"b": 1}, F(3)),
                          ("pal6", {"b": 1}, F(5, 2)), ("br", {"a": 1}, F(3))):
        s = builtin(name, **vals)
        P = s.parametrization(h)
        if P.inverse is None or name == "br":
            P = s.parametrization(h, "lines")
        M = extract_mobius(s, P)
        for t in (F(1, 3), F(5, 2), F(-7, 4)):
            try:
                p = P(t)
                ok = shadowing_holds(s.map, P.inverse, M, p)
            except ZeroDivisionError:
                continue
            check(fails, ok, f"{name} h={h} t={t}: shadowing square fails")
    # parser round trip, 500 cases
    syms = {"a": None, "b": None}
    parsed = 0
    for _ in range(500):
        src = _random_expr(rng)
        try:
            e = parse_expression(src, syms, ("x", "y", "t", "h"))
        except ParseError:
            continue
        parsed += 1
        text = expr_str(e)
        again = parse_expression(text, syms, ("x", "y", "t", "h"))
        if again != e or expr_str(again) != text:
            fails.append(f"round trip fails for {src!r}")
    check(fails, parsed >= 400, f"only {parsed} fuzz cases parsed")
    # report byte-determinism
    for argv in (["analyze", "--builtin", "br", "--a", "1", "--h-grid", "3/2,2,3", "--symbolic"],
                 ["conjugate", "--f", "pal6", "--g", "pal5", "--auto"],
                 ["verify", "--builtin", "saito"]):
        outs = []
        for k in range(2):
            path = tmp_dir / f"det{k}.json"
            with contextlib.redirect_stdout(io.StringIO()):
                main(argv + ["--out", str(path)])
            outs.append(path.read_bytes())
        check(fails, outs[0] == outs[1], f"{argv[0]} report differs between runs")
    return report(11, "conservation, shadowing, parser fuzz (500), report determinism", fails)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("n", range(1, 11))
def test_criterion(n, capsys):
    with capsys.disabled():
        print()
        ok = CRITERIA[n - 1]()
    assert ok


def test_criterion_11(tmp_path, capsys):
    with capsys.disabled():
        print()
        ok = criterion_11(tmp_path)
    assert ok


if __name__ == "__main__":
    import sys
    import tempfile
    from pathlib import Path

    for fn in CRITERIA:
        fn()
    with tempfile.TemporaryDirectory() as d:
        criterion_11(Path(d))
    sys.exit(0 if all(RESULTS.values()) else 1)
