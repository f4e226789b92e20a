from fractions import Fraction

import pytest
import sympy

from genus0.builtins import BR_CLOSED_INVERSE, builtin
from genus0.curves import (
    CurveError,
    Parametrization,
    PlaneCurve,
    agree_on_curve,
    check_proper,
    conic_base_point,
    invert_parametrization,
    parametrize_by_lines,
)
from genus0.exact import compose, quad

from conftest import rf, to_sympy

CIRCLE = PlaneCurve(rf("x^2+y^2-1").num)


def br_curve(h, a=1):
    return builtin("br", a=a).curve(Fraction(h))


def test_curve_degrees_and_content():
    c = PlaneCurve(rf("h*(y*(1+x)-h)").num)
    assert (c.deg_x, c.deg_y, c.degree) == (1, 1, 2)
    assert PlaneCurve(rf("x^2*y-3").num).degree == 3
    with pytest.raises(CurveError):
        PlaneCurve(rf("3").num)


def test_base_point_br():
    assert conic_base_point(br_curve("3/2"), Fraction(1)) == (1, 2)


def test_base_point_circle_and_empty_real_conic():
    assert conic_base_point(CIRCLE, Fraction(-1)) == (-1, 0)
    empty = PlaneCurve(rf("x^2+y^2+1").num)
    with pytest.raises(CurveError):
        conic_base_point(empty, Fraction(0), real=True)
    # over C the point exists in Q(sqrt(-1))
    x0, y0 = conic_base_point(empty, Fraction(0))
    assert y0 == quad(0, 1, -1)


def test_base_point_in_quadratic_field():
    x0, y0 = conic_base_point(br_curve("7/4"), Fraction(1))
    assert y0.d == 57
    assert br_curve("7/4").contains(x0, y0)


def test_circle_by_lines():
    p = parametrize_by_lines(CIRCLE, (Fraction(-1), Fraction(0)))
    assert p.p1 == rf("(1-t^2)/(1+t^2)")
    assert p.p2 == rf("2*t/(1+t^2)")
    x, y, t = sympy.symbols("x y t")
    assert sympy.simplify((x**2 + y**2 - 1).subs({x: to_sympy(p.p1), y: to_sympy(p.p2)})) == 0


def test_parabola_by_lines():
    par = PlaneCurve(rf("y-x^2").num)
    p = parametrize_by_lines(par, (Fraction(0), Fraction(0)))
    assert p.on_curve(par)
    assert check_proper(p, par)
    assert invert_parametrization(p, par) == rf("y/x") or agree_on_curve(
        invert_parametrization(p, par), rf("y/x"), par)


def test_br_symbolic_family_matches_lines():
    br = builtin("br")
    fam = br.family
    curve = br.curve(rf("h"))
    x0, y0 = conic_base_point(curve, rf("a"))
    p = parametrize_by_lines(curve, (x0, y0))
    assert p.p1 == fam.p1 and p.p2 == fam.p2


def test_lines_errors():
    with pytest.raises(CurveError):
        parametrize_by_lines(CIRCLE, (Fraction(1), Fraction(1)))
    with pytest.raises(CurveError):
        parametrize_by_lines(PlaneCurve(rf("x^3-y").num), (Fraction(0), Fraction(0)))
    lines = PlaneCurve(rf("x*y").num)
    with pytest.raises(CurveError):
        parametrize_by_lines(lines, (Fraction(0), Fraction(0)))


def test_check_proper():
    p = parametrize_by_lines(CIRCLE, (Fraction(-1), Fraction(0)))
    assert check_proper(p, CIRCLE)
    t2 = rf("t^2")
    doubled = Parametrization(compose(p.p1, {"t": t2}), compose(p.p2, {"t": t2}))
    assert doubled.on_curve(CIRCLE)
    assert not check_proper(doubled, CIRCLE)
    hyper = PlaneCurve(rf("y*(1+x)-h").num)
    assert check_proper(Parametrization(rf("t"), rf("h/(t+1)")), hyper)


def test_invert_examples():
    hyper = PlaneCurve(rf("y*(1+x)-h").num)
    assert invert_parametrization(Parametrization(rf("t"), rf("h/(t+1)")), hyper) == rf("x")
    p = parametrize_by_lines(CIRCLE, (Fraction(-1), Fraction(0)))
    q = invert_parametrization(p, CIRCLE)
    assert q == rf("y/(x+1)")
    assert compose(q, {"x": p.p1, "y": p.p2}) == rf("t")


@pytest.mark.parametrize("h", ["3/2", "7/4", "3", "5/2"])
def test_br_inverse_matches_closed_form(h):
    br = builtin("br", a=1)
    curve = br.curve(Fraction(h))
    p = br.parametrization(Fraction(h), "lines")
    q = invert_parametrization(p, curve)
    assert p.on_curve(curve) and check_proper(p, curve)
    assert agree_on_curve(q, p.inverse, curve)
    closed = rf(BR_CLOSED_INVERSE.replace("a", "1").replace("h", f"({h})"))
    assert agree_on_curve(q, closed, curve)


def test_improper_inversion_refused():
    t2 = rf("t^2")
    p = parametrize_by_lines(CIRCLE, (Fraction(-1), Fraction(0)))
    doubled = Parametrization(compose(p.p1, {"t": t2}), compose(p.p2, {"t": t2}))
    with pytest.raises(CurveError):
        invert_parametrization(doubled, CIRCLE)


def test_degenerate_conic_detected():
    saito = builtin("saito")
    assert saito.curve(0).is_degenerate_conic()
    assert not builtin("br", a=1).curve(Fraction(3)).is_degenerate_conic()
