"""Exact coefficient fields, polynomials and rational functions."""

from .scalars import (
    MixedFieldError,
    NoExactSqrt,
    QuadNumber,
    as_rational,
    compare_modulus_to_one,
    downcast,
    exact_sqrt,
    quad,
    real_sign,
    scalar_ops,
    squarefree_decompose,
)
from .poly import DEG_ZERO, Poly, poly_divmod, poly_gcd
from .mpoly import MPoly, NotExactDivision, RatFunc, compose, divexact, gen_key, mgcd, prem
from .generic import as_expr, gdiff, gens_of, gfloat, gsubs, is_radical, is_zero, parts, radical

CURVE_VARS = ("x", "y")


def ratfunc_normalize(num, den) -> RatFunc:
    """Reduced form of ``num/den`` with a monic denominator.

    Accepts dense :class:`Poly` (converted through their variable name),
    :class:`MPoly` or scalars.
    """
    num, den = _as_ratfunc(num), _as_ratfunc(den)
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    return num / den


def _as_ratfunc(p) -> RatFunc:
    if isinstance(p, RatFunc):
        return p
    if isinstance(p, MPoly):
        return RatFunc(p, None, True)
    if isinstance(p, Poly):
        out = RatFunc.const(0)
        v = RatFunc.var(p.var)
        for c in reversed(p.coeffs):
            out = out * v + c
        return out
    return RatFunc.const(p)


def reduction_var(f: MPoly, variables=CURVE_VARS) -> str:
    """Variable of maximal degree in f among ``variables`` (ties go to the last)."""
    best, best_deg = None, 0
    for v in variables:
        d = f.degree(v)
        if d >= best_deg and d > 0:
            best, best_deg = v, d
    if best is None:
        raise ValueError("curve polynomial is constant in the curve variables")
    return best


def bipoly_reduce_mod_curve(g: MPoly, f: MPoly, var: str | None = None) -> MPoly:
    """Representative of g modulo <f> by (fraction-free) pseudo-division.

    The reduction variable defaults to the curve variable in which ``f`` has
    maximal degree.  The result has lower degree than ``f`` in that variable
    and is zero exactly when ``f`` divides ``lc(f)**k * g``.
    """
    if f.is_constant():
        raise ValueError("cannot reduce modulo a constant")
    if var is None:
        var = reduction_var(f)
    if g.degree(var) < f.degree(var):
        return g
    r = prem(g, f, var)
    return r


def vanishes_on_curve(g, f: MPoly) -> bool:
    """True when the numerator of g reduces to zero modulo f."""
    if isinstance(g, RatFunc):
        g = g.num
    elif not isinstance(g, MPoly):
        return not g
    return bipoly_reduce_mod_curve(g, f).is_zero()


__all__ = [
    "MixedFieldError",
    "NoExactSqrt",
    "QuadNumber",
    "as_rational",
    "compare_modulus_to_one",
    "downcast",
    "exact_sqrt",
    "quad",
    "real_sign",
    "scalar_ops",
    "squarefree_decompose",
    "DEG_ZERO",
    "Poly",
    "poly_divmod",
    "poly_gcd",
    "MPoly",
    "NotExactDivision",
    "RatFunc",
    "compose",
    "divexact",
    "gen_key",
    "mgcd",
    "prem",
    "ratfunc_normalize",
    "bipoly_reduce_mod_curve",
    "vanishes_on_curve",
    "reduction_var",
    "CURVE_VARS",
    "as_expr",
    "gdiff",
    "gens_of",
    "gfloat",
    "gsubs",
    "is_radical",
    "is_zero",
    "parts",
    "radical",
]
