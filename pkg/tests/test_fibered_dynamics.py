import math
import os
from fractions import Fraction

import pytest

from genus0.builtins import BUILTIN_NAMES, builtin
from genus0.curves import Parametrization
from genus0.exact import RatFunc, compose, quad
from genus0.fibered_dynamics import (
    FiberError,
    IntegrableSystem,
    PlanarVectorField,
    analyze_fiber,
    analyze_fibers,
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
from genus0.mobius import INFINITY, Mobius, classify, conjugacy_invariant, lie_symmetry_1d

from conftest import rf
from reference_data import CONJUGATIONS, FIELDS, LIE_1D, MEASURES, MOBIUS

F = Fraction


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_first_integral(name):
    assert verify_first_integral(builtin(name))


def test_wrong_first_integral():
    s = builtin("saito")
    wrong = IntegrableSystem("saito-xy", s.map, rf("x*y"))
    assert not verify_first_integral(wrong)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_inverse_map(name):
    assert builtin(name).map.inverse_verified()


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_symbolic_mobius(name):
    M = builtin(name).symbolic_mobius()
    assert M == Mobius.from_ratfunc(rf(MOBIUS[name]))


@pytest.mark.parametrize("name", sorted(LIE_1D))
def test_lie_symmetry_1d_rows(name):
    M = builtin(name).symbolic_mobius()
    Y = lie_symmetry_1d(M)
    t = RatFunc.var("t")
    got = sum((t**k * c for k, c in enumerate(Y.coeffs)), RatFunc.const(0))
    want = rf(LIE_1D[name])
    # Y is fixed by M only up to the scale of its representative
    assert (got / want).is_constant()


def test_extract_mobius_per_fiber():
    s = builtin("pal2")
    P = Parametrization(rf("t"), rf("1/((h-1)*t-b)"))
    assert extract_mobius(s, P) == Mobius.from_ratfunc(rf("1/((h-1)*t-b)"))
    br = builtin("br", a=1)
    for h in (F(3, 2), F(7, 4), F(3)):
        m = extract_mobius(br, br.parametrization(h, "lines"))
        assert conjugacy_invariant(m) == h + 2


def test_extract_mobius_rejects_wrong_fiber():
    s = builtin("saito")
    wrong = IntegrableSystem("bad", s.map, rf("x*y"), s.family)
    with pytest.raises(FiberError):
        extract_mobius(wrong, Parametrization(rf("t"), rf("h/t"), rf("x")))


# conic fibers only; pal3 and pal4 fibers are lines
@pytest.mark.parametrize("name", ["br", "saito", "nostra", "pal1", "pal2", "pal5", "pal6"])
def test_invariant_independent_of_parametrization(name):
    vals = {"a": 1} if name == "br" else ({"b": 1} if name.startswith("pal") else {})
    s = builtin(name, **vals)
    hs = [F(3, 2), F(7, 4), F(5, 2), F(3), F(4), F(-3), F(1, 3), F(9, 5), F(11, 3), F(-5, 2)]
    done = 0
    for h in hs:
        curve = s.curve(h)
        if curve.degree != 2 or curve.is_degenerate_conic():
            continue
        try:
            by_lines = s.mobius_at(h, "lines")
        except FiberError:
            continue
        assert conjugacy_invariant(by_lines) == conjugacy_invariant(s.mobius_at(h))
        done += 1
    assert done >= 5


@pytest.mark.parametrize("name", sorted(FIELDS))
def test_lie_field_rows(name):
    X = lie_symmetry_field(builtin(name))
    assert (X.X1, X.X2) == tuple(rf(c) for c in FIELDS[name])


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_lie_field_properties(name):
    s = builtin(name)
    X = lie_symmetry_field(s)
    assert verify_lie_compatibility(X, s.map, "symbolic")
    assert verify_lie_compatibility(X, s.map, "sampled", n=10)
    # tangent to the fibers
    assert X.X1 * s.V.diff("x") + X.X2 * s.V.diff("y") == 0
    mu = measure_density(X, s)
    assert verify_measure(mu, s.map)
    assert compose(mu, {"x": s.map.F1, "y": s.map.F2}) == s.map.jacobian_det() * mu


def test_broken_field_fails():
    s = builtin("br")
    X = lie_symmetry_field(s)
    assert not verify_lie_compatibility(X.negated_second(), s.map, "symbolic")
    assert not verify_lie_compatibility(X.negated_second(), s.map, "sampled")


@pytest.mark.parametrize("name", sorted(MEASURES))
def test_measure_values(name):
    s = builtin(name)
    assert measure_density(lie_symmetry_field(s), s) == rf(MEASURES[name])


def test_measure_rejects_non_tangent_field():
    s = builtin("saito")
    with pytest.raises(FiberError):
        measure_density(PlanarVectorField(rf("x"), rf("y")), s)


def test_lines_field_differs_by_fiber_constant():
    # fields from two parametrizations: mu ratio constant on each fiber
    s = builtin("br", a=1)
    X = lie_symmetry_field(s)
    mu = measure_density(X, s)
    assert mu == rf("x*y")


@pytest.mark.parametrize("F_,G_,f,m,psi,psi_inv", CONJUGATIONS)
def test_conjugations(F_, G_, f, m, psi, psi_inv):
    res = build_conjugation(builtin(F_), builtin(G_), rf(f), Mobius.from_ratfunc(rf(m)))
    assert res.ok, res.diagnostic()
    assert res.psi == tuple(rf(c) for c in psi)
    assert res.psi_inv == tuple(rf(c) for c in psi_inv)
    VG = builtin(G_).V
    VF = builtin(F_).V
    assert compose(VG, {"x": res.psi[0], "y": res.psi[1]}) == compose(rf(f), {"h": VF})


def test_conjugation_failure_is_reported():
    res = build_conjugation(builtin("pal6"), builtin("pal5"), rf("h"), Mobius.from_ratfunc(rf("h/t")))
    assert not res.ok
    assert "psi o F = G o psi" in res.diagnostic()


def test_level_correspondence():
    def sugg(first, second, **v):
        return suggest_level_correspondence(builtin(first, **v), builtin(second, **v))

    assert sugg("pal1", "pal2", b=1) == rf("-(1-h)/h")
    assert sugg("pal1", "pal2") == rf("-(b^3-h)/h")
    assert sugg("pal6", "pal5", b=1) == rf("h")
    assert sugg("pal6", "pal5") == rf("h")
    assert sugg("pal5", "pal3", b=1) is None
    assert sugg("pal5", "pal3") is None


def test_br_classification():
    br = builtin("br", a=1)
    r = analyze_fiber(br, 3)
    assert r.kind == "hyperbolic"
    assert all(fp.at_infinity for fp in r.fixed_points)
    assert {fp.t for fp in r.fixed_points} == {quad(F(3, 2), F(1, 2), 5), quad(F(3, 2), F(-1, 2), 5)}
    r = analyze_fiber(br, 2)
    assert r.kind == "parabolic" and r.mclass.t0 == 1
    r = analyze_fiber(br, F(3, 2))
    expect = (math.atan2(-math.sqrt(4 - 2.25), 1.5) / (2 * math.pi)) % 1
    assert r.kind == "rotation" and abs(r.theta - expect) < 1e-12


def test_br_fixed_point_and_lines_mode():
    br = builtin("br", a=1)
    r = analyze_fiber(br, F(3, 2), "lines")
    assert r.kind == "rotation" and r.verdicts["on_curve"]
    # the fixed point (a, a) lies on the critical level 2 - 1/a
    assert analyze_fiber(br, 1).status in ("ok", "degenerate", "error")


def test_nostra_parabolic_fixed_point():
    r = analyze_fiber(builtin("nostra"), F(-1, 4))
    assert r.kind == "parabolic"
    assert r.fixed_points[0].point == (F(-1, 2), F(-1, 2))
    assert r.fixed_points[0].verified


def test_saito_degenerate_and_periodic():
    s = builtin("saito")
    assert analyze_fiber(s, 0).status == "degenerate"
    r = analyze_fiber(s, -1)
    assert r.kind == "rotation" and r.theta == 0.5 and r.period == 2
    r = analyze_fiber(s, quad(F(-1, 2), F(1, 2), -3))
    assert r.period == 3


def test_analyze_fibers_keeps_order(monkeypatch):
    monkeypatch.setenv("GENUS0_THREADS", "3")
    s = builtin("br", a=1)
    hs = [F(3), F(3, 2), F(2), F(7, 4)]
    reps = analyze_fibers(s, hs)
    assert [r.h for r in reps] == hs
    assert analyze_fibers(s, []) == []


def test_rotation_profile():
    br = builtin("br", a=1)
    prof = rotation_profile(br, [F(3, 2), F(3)])
    assert abs(prof[0][1] - 0.884973) < 1e-6
    assert prof[1][1] is None
    s = builtin("saito")
    assert rotation_profile(s, [quad(0, 1, -1)])[0][1] == 0.75


def test_theta_tends_to_five_sixths():
    br = builtin("br", a=1)
    th = rotation_profile(br, [F(1) + F(1, 10**8)])[0][1]
    assert abs(th - 5 / 6) < 1e-4


def test_solve_period_level():
    br = builtin("br", a=1)
    h = solve_period_level(br, F(6, 7))
    assert abs(h - 2 * math.cos(12 * math.pi / 7)) < 1e-9
    assert abs(h - 1.246980) < 1e-6
    assert solve_period_level(br, F(1, 2)) is None


def test_period_bound():
    theta_a, p = period_bound(builtin("br", a=1))
    assert theta_a == F(5, 6) and p == 7
    with pytest.raises(FiberError):
        period_bound(builtin("saito"))
