import sympy

from genus0.exact import MPoly, RatFunc
from genus0.parser import parse_expression
from genus0.serialize import expr_str

SYMS = {name: None for name in ("a", "b")}
VARS = ("x", "y", "t", "h")


def rf(src, **values):
    """Parse with x, y, t, h free and a, b symbolic unless given."""
    syms = dict(SYMS)
    syms.update(values)
    return parse_expression(src, syms, VARS)


def to_sympy(e):
    if isinstance(e, (RatFunc, MPoly)):
        e = expr_str(e)
    return sympy.sympify(str(e).replace("^", "**"))
