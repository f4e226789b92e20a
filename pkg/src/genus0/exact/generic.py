"""Uniform operations on the three kinds of expression the pipeline handles.

An *expression* is a scalar, a :class:`RatFunc`, or a symbolic radical: a
:class:`QuadNumber` ``p + q*sqrt(d)`` whose parts are RatFuncs.  The helpers
here substitute, differentiate and evaluate all three the same way.
"""

from __future__ import annotations

import cmath
from fractions import Fraction

from .mpoly import MPoly, RatFunc
from .scalars import MixedFieldError, QuadNumber, downcast, exact_sqrt, quad

__all__ = [
    "is_radical",
    "radical",
    "as_expr",
    "gsubs",
    "gdiff",
    "gfloat",
    "gens_of",
    "is_zero",
    "rational_part",
    "parts",
]


def is_radical(e) -> bool:
    return isinstance(e, QuadNumber) and not e.numeric


def radical(d) -> QuadNumber:
    """``sqrt(d)`` for a non-constant rational function ``d``."""
    d = as_expr(d)
    return QuadNumber(RatFunc.const(0), RatFunc.const(1), d)


def as_expr(e):
    """Promote MPolys to RatFunc; leave everything else alone."""
    if isinstance(e, MPoly):
        return RatFunc(e, None, True)
    if isinstance(e, int) and not isinstance(e, bool):
        return Fraction(e)
    return e


def parts(e):
    """(p, q, d) with q = 0 and d = None for radical-free expressions."""
    if is_radical(e):
        return e.p, e.q, e.d
    return e, 0, None


def gens_of(e) -> set:
    if isinstance(e, RatFunc):
        return e.used_gens()
    if isinstance(e, MPoly):
        return e.used_gens()
    if is_radical(e):
        return gens_of(e.p) | gens_of(e.q) | gens_of(e.d)
    return set()


def is_zero(e) -> bool:
    if isinstance(e, (float, complex)):
        return e == 0
    return not e


def _has_float(values) -> bool:
    return any(isinstance(v, (float, complex)) and not isinstance(v, bool) for v in values)


def _sqrt_value(d):
    """Square root of a substituted radicand, staying exact when possible."""
    if isinstance(d, (float, complex)):
        return cmath.sqrt(d)
    if isinstance(d, RatFunc):
        if d.is_constant():
            return exact_sqrt(d.constant_value())
        return radical(d)
    return exact_sqrt(d)


def gsubs(e, values: dict):
    """Substitute generators in any expression.

    Substitution into a radical takes the principal square root of the new
    radicand, so a radical that becomes a rational constant turns into an
    exact element of Q(sqrt s).  Float values produce complex floats.
    """
    if isinstance(e, MPoly):
        e = RatFunc(e, None, True)
    if isinstance(e, RatFunc):
        used = e.used_gens()
        vals = {k: v for k, v in values.items() if k in used}
        if not vals:
            return e
        if _has_float(vals.values()):
            if used <= set(vals):
                return e.eval_float(vals)
            raise MixedFieldError("partial float substitution is not supported")
        out = e.subs(vals)
        if isinstance(out, RatFunc) and out.is_constant():
            return out.constant_value()
        return out
    if is_radical(e):
        p = gsubs(e.p, values)
        q = gsubs(e.q, values)
        d = gsubs(e.d, values)
        if is_zero(q):
            return p
        root = _sqrt_value(d)
        if isinstance(root, complex) or isinstance(p, complex) or isinstance(q, complex):
            return downcast_any(p) + downcast_any(q) * complex(root)
        return p + q * root
    return e


def downcast_any(e) -> complex:
    if isinstance(e, RatFunc):
        return e.downcast()
    return downcast(e)


def gdiff(e, var: str):
    if isinstance(e, MPoly):
        return RatFunc(e.diff(var))
    if isinstance(e, RatFunc):
        return e.diff(var)
    if is_radical(e):
        if var in gens_of(e.d):
            # d(p + q sqrt(d)) = p' + (q' + q d'/(2d)) sqrt(d)
            dq = gdiff(e.q, var) + e.q * e.d.diff(var) / (2 * e.d)
            return quad(gdiff(e.p, var), dq, e.d)
        return quad(gdiff(e.p, var), gdiff(e.q, var), e.d)
    return Fraction(0)


def gfloat(e, values: dict | None = None) -> complex:
    """Complex value of an expression with all generators given as numbers."""
    values = values or {}
    if isinstance(e, (float, complex)):
        return complex(e)
    if isinstance(e, MPoly):
        e = RatFunc(e, None, True)
    if isinstance(e, RatFunc):
        fv = {k: complex(downcast_any(v)) if not isinstance(v, (float, complex)) else complex(v)
              for k, v in values.items()}
        if e.is_constant():
            return e.downcast()
        return e.eval_float(fv)
    if is_radical(e):
        return gfloat(e.p, values) + gfloat(e.q, values) * cmath.sqrt(gfloat(e.d, values))
    return downcast(e)


def rational_part(e, what: str = "expression"):
    """Return ``e`` as a radical-free expression, failing if sqrt survives."""
    if is_radical(e):
        raise ValueError(f"{what} still depends on sqrt({e.d})")
    return e
