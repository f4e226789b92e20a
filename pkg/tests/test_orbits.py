import csv
import io
import math
import random
from fractions import Fraction

import pytest

from genus0.builtins import BUILTIN_NAMES, builtin
from genus0.exact import quad
from genus0.fibered_dynamics import analyze_fiber, solve_period_level
from genus0.orbits import (
    conserves,
    detect_period,
    estimate_rotation_number,
    fiber_point,
    iterate,
    orbit_csv,
    shadowing_holds,
    verify_fiber_prediction,
    write_csv,
)

F = Fraction
CUBE_ROOT = quad(F(-1, 2), F(1, 2), -3)
I = quad(0, 1, -1)

PARAMS = {"br": {"a": 1}, "saito": {}, "nostra": {}}


def system(name):
    return builtin(name, **PARAMS.get(name, {"b": 1}))


def test_saito_collapses_to_origin():
    s = system("saito")
    o = iterate(s.map, (F(5, 3), F(0)), 4)
    assert o.points[1] == (0, 0) and o.points[-1] == (0, 0)
    o = iterate(s.map, (F(-1), F(7, 2)), 4)
    assert o.points[1] != (0, 0) and o.points[2] == (0, 0)


def test_pole_at_step_zero():
    o = iterate(system("nostra").map, (F(2), F(-1)), 10)
    assert o.status == "pole" and o.stop == 0 and o.steps == 0


def test_pole_later_and_divergence():
    s = system("saito")
    # (x, -1/x) hits the denominator 1 + xy
    o = iterate(s.map, (F(2), F(-1, 2)), 5)
    assert o.status == "pole" and o.stop == 0
    o = iterate(system("pal3").map, (1.0, 3.0), 200, mode="float")
    assert o.status == "diverged"
    with pytest.raises(ValueError):
        iterate(s.map, (F(1), F(1)), 0)


def test_modes():
    s = system("saito")
    assert iterate(s.map, (F(1), F(1)), 2).mode == "exact-rational"
    assert iterate(s.map, (F(1), I), 2).mode == "exact-quadratic"
    assert iterate(s.map, (1.0, 1.0), 2).mode == "float"


def test_exact_period_three_at_cube_root():
    s = system("saito")
    o = iterate(s.map, (F(1), CUBE_ROOT / 2), 9)
    assert detect_period(o) == 3
    o = iterate(s.map, (F(1), CUBE_ROOT / 2), 9, stop_on_return=True)
    assert o.status == "period" and o.period == 3


@pytest.mark.parametrize("h,p", [(F(-1), 2), (CUBE_ROOT, 3), (I, 4)])
def test_period_on_three_fiber_points(h, p):
    s = system("saito")
    for t in (F(1), F(2, 3), F(-5, 7)):
        o = iterate(s.map, fiber_point(s, h, t), 3 * p)
        assert detect_period(o) == p
        assert o.points[p] == o.points[0]


def test_float_period_seven():
    br = system("br")
    h = solve_period_level(br, F(6, 7))
    o = iterate(br.map, fiber_point(br, h, 0.5), 30, mode="float")
    assert detect_period(o, 1e-8) == 7


def test_fixed_point_has_period_one():
    o = iterate(system("br").map, (F(1), F(1)), 4)
    assert detect_period(o) == 1


def test_irrational_rotation_has_no_small_period():
    s = system("saito")
    h = quad(F(3, 5), F(4, 5), -1)
    o = iterate(s.map, fiber_point(s, complex(h.p, h.q), 0.5), 600, mode="float")
    assert detect_period(o) is None


def test_rotation_estimates():
    br = system("br")
    h = F(3, 2)
    p0 = fiber_point(br, 1.5, 0.3)
    est = estimate_rotation_number(br, p0, 10_000, h=h)
    assert abs(est - 0.884973271918692) < 1e-6
    one = estimate_rotation_number(br, p0, 1, h=h)
    assert abs(one - est) < 1e-12
    s = system("saito")
    est = estimate_rotation_number(s, fiber_point(s, 1j, 0.7), 1000, h=I)
    assert abs(est - 0.75) < 1e-9


def test_rotation_estimate_rejects_hyperbolic():
    br = system("br")
    with pytest.raises(ValueError):
        estimate_rotation_number(br, fiber_point(br, 3.0, 0.5), 10, h=F(3))


def _prediction(name, h):
    s = system(name)
    rep = analyze_fiber(s, h)
    return rep, verify_fiber_prediction(rep, s)


def test_nostra_attractor():
    rep, v = _prediction("nostra", F(1))
    r5 = quad(F(-1, 2), F(1, 2), 5)
    assert rep.fixed_points[0].point == (r5, r5)
    assert v.ok, v.failures


def test_nostra_parabolic_attractor():
    rep, v = _prediction("nostra", F(-1, 4))
    assert rep.fixed_points[0].point == (F(-1, 2), F(-1, 2))
    assert v.ok, v.failures


def test_pal3_converges_to_b_over_i_minus_one():
    rep, v = _prediction("pal3", F(1, 2))
    att = rep.fixed_points[0]
    assert att.point == (F(-2), F(-2))
    assert v.ok, v.failures


@pytest.mark.parametrize("h", [F(1, 2), F(-1, 2), I / 2, quad(F(3, 10), F(2, 5), -1)])
def test_saito_attractor_at_origin_fiber(h):
    rep, v = _prediction("saito", h)
    assert rep.kind == "hyperbolic"
    assert rep.fixed_points[0].point == (0, h)
    assert v.ok, v.failures


def test_prediction_catches_wrong_claim():
    s = system("nostra")
    rep = analyze_fiber(s, F(1))
    rep.fixed_points.reverse()  # claim the repeller attracts
    assert not verify_fiber_prediction(rep, s, trials=5).ok


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_exact_conservation(name):
    s = system(name)
    rng = random.Random(name)
    for _ in range(50):
        p0 = (F(rng.randint(1, 40), rng.randint(1, 9)), F(rng.randint(1, 40), rng.randint(1, 9)))
        o = iterate(s.map, p0, 6)
        assert conserves(o, s.V)


def test_float_conservation_on_rotation_fiber():
    br = system("br")
    o = iterate(br.map, fiber_point(br, 1.5, 0.2), 10_000, mode="float")
    assert o.status == "completed"
    assert conserves(o, br.V, 1e-9)


@pytest.mark.parametrize("name,h", [("br", F(3)), ("saito", F(3)), ("nostra", F(2)), ("pal1", F(3)),
                                    ("pal2", F(3)), ("pal3", F(3)), ("pal4", F(3)), ("pal5", F(3)),
                                    ("pal6", F(3))])
def test_mobius_shadowing(name, h):
    s = system(name)
    P = s.parametrization(h) if name != "br" else s.parametrization(h, "lines")
    M = s.mobius_at(h) if name != "br" else s.mobius_at(h, "lines")
    done = 0
    for t in (F(1, 3), F(2), F(-3, 5), F(7, 2)):
        try:
            p = fiber_point(s, h, t) if name != "br" else P(t)
            assert shadowing_holds(s.map, P.inverse, M, p)
            done += 1
        except ZeroDivisionError:
            pass
    assert done >= 2


def test_csv_format(tmp_path):
    s = system("saito")
    o = iterate(s.map, (F(1), F(1, 3)), 3)
    text = orbit_csv(o)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["step", "x", "y", "x_exact", "y_exact"]
    assert rows[1][3] == "1" and rows[1][4] == "0.333333333333333333333333333333"
    path = tmp_path / "o.csv"
    write_csv(o, path)
    assert path.read_text() == text
    o = iterate(s.map, (1.0, 0.5), 2)
    assert list(csv.reader(io.StringIO(orbit_csv(o))))[0] == ["step", "x", "y"]
