from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genus0.builtins import builtin
from genus0.exact import quad
from genus0.parser import ParseError, parse_expression, parse_scalar
from genus0.serialize import expr_str

from conftest import rf


def test_map_components_parse():
    br = builtin("br")
    assert rf("(a - y + y^2)/x") == br.map.F2
    saito = builtin("saito")
    assert rf("y*(1+x)/(1+x*y)") == saito.map.F2


def test_syntax_error_position():
    with pytest.raises(ParseError) as err:
        parse_expression("x +")
    assert (err.value.line, err.value.column) == (1, 4)


def test_multiline_error_position():
    with pytest.raises(ParseError) as err:
        parse_expression("x +\n  * y")
    assert (err.value.line, err.value.column) == (2, 3)


def test_unknown_identifier():
    with pytest.raises(ParseError, match="unknown identifier 'z'"):
        parse_expression("x + z")


def test_division_by_zero_polynomial():
    with pytest.raises(ParseError, match="zero polynomial"):
        parse_expression("x/(y-y)")


def test_negative_exponent_rejected():
    with pytest.raises(ParseError):
        parse_expression("x^-1")


def test_precedence_and_whitespace():
    assert parse_expression(" -x ^ 2 + 3*y ") == rf("3*y-(x*x)")
    assert parse_expression("2/4*x") == rf("x/2")
    assert parse_expression("x**3") == rf("x*x*x")


def test_scalar_literals():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar("0.25") == Fraction(1, 4)
    assert parse_scalar("1/2+3/2*sqrt(-3)") == quad(Fraction(1, 2), Fraction(3, 2), -3)
    assert parse_scalar("sqrt(12)") == quad(0, 2, 3)


def test_params_substituted():
    assert parse_expression("a*x", {"a": Fraction(2)}) == rf("2*x")
    assert parse_expression("a*x", {"a": None}) == rf("x*a")


_ATOMS = ["x", "y", "h", "a", "b", "0", "1", "2", "7", "1/3", "-5/2", "sqrt(5)", "sqrt(-3)", "(1+sqrt(5))/2"]


@st.composite
def exprs(draw, depth=3):
    if depth == 0 or draw(st.integers(0, 3)) == 0:
        return draw(st.sampled_from(_ATOMS))
    op = draw(st.sampled_from(["+", "-", "*", "/", "^", "neg"]))
    left = draw(exprs(depth=depth - 1))
    if op == "neg":
        return f"-({left})"
    if op == "^":
        return f"({left})^{draw(st.integers(0, 3))}"
    return f"({left}){op}({draw(exprs(depth=depth - 1))})"


def _parse(src):
    try:
        return parse_expression(src, {"a": None, "b": None}, ("x", "y", "t", "h"))
    except ParseError:
        return None


@settings(max_examples=500, deadline=None)
@given(exprs())
def test_round_trip_fuzz(src):
    e = _parse(src)
    if e is None:
        return
    text = expr_str(e)
    again = _parse(text)
    assert again == e
    assert expr_str(again) == text
