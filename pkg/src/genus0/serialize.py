"""Canonical strings and JSON values for exact and float data."""

from __future__ import annotations

import json
from fractions import Fraction

from .exact import MPoly, QuadNumber, RatFunc
from .exact.mpoly import format_mpoly, format_ratfunc
from .mobius import INFINITY


def float_str(x: float) -> str:
    return format(x, ".17g")


def expr_str(e) -> str:
    """Canonical text of an expression; parsing it back gives the same form."""
    if isinstance(e, RatFunc):
        return format_ratfunc(e)
    if isinstance(e, MPoly):
        return format_mpoly(e)
    if isinstance(e, Fraction):
        return str(e)
    if isinstance(e, int):
        return str(e)
    if isinstance(e, float):
        return float_str(e)
    if isinstance(e, complex):
        return f"({float_str(e.real)}) + ({float_str(e.imag)})*i"
    if e is INFINITY:
        return "oo"
    return str(e)


def scalar_json(v):
    """JSON value for a scalar.

    Rationals and quadratic numbers become {"p", "q", "d"} digit strings,
    floats keep 17 significant digits, complex floats split into re/im.
    """
    if v is None:
        return None
    if v is INFINITY:
        return "oo"
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        v = Fraction(v)
    if isinstance(v, Fraction):
        return {"p": str(v), "q": "0", "d": 0}
    if isinstance(v, QuadNumber) and v.numeric:
        return {"p": str(v.p), "q": str(v.q), "d": v.d}
    if isinstance(v, float):
        return float(float_str(v))
    if isinstance(v, complex):
        return {"re": float(float_str(v.real)), "im": float(float_str(v.imag))}
    if isinstance(v, RatFunc) and v.is_constant():
        return scalar_json(v.constant_value())
    return expr_str(v)


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"
