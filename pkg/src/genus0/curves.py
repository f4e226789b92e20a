"""Rational plane curves: base points on conics, parametrization by lines,
properness and inversion of parametrizations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import (
    MPoly,
    RatFunc,
    bipoly_reduce_mod_curve,
    exact_sqrt,
    gdiff,
    gsubs,
    is_radical,
    is_zero,
    prem,
    radical,
    reduction_var,
)
from .exact.mpoly import content_in, divexact, mgcd, poly_gcd_multi
from .exact.scalars import NoExactSqrt, QuadNumber

__all__ = [
    "CurveError",
    "PlaneCurve",
    "Parametrization",
    "conic_base_point",
    "parametrize_by_lines",
    "check_proper",
    "invert_parametrization",
    "agree_on_curve",
]


class CurveError(ValueError):
    pass


def _xy_content(f: MPoly) -> MPoly:
    """gcd of the coefficients of f viewed as a polynomial in x and y."""
    groups: dict = {}
    ix = f.gens.index("x") if "x" in f.gens else None
    iy = f.gens.index("y") if "y" in f.gens else None
    for e, c in f.terms.items():
        key = (e[ix] if ix is not None else 0, e[iy] if iy is not None else 0)
        ne = list(e)
        if ix is not None:
            ne[ix] = 0
        if iy is not None:
            ne[iy] = 0
        groups.setdefault(key, {})[tuple(ne)] = c
    return poly_gcd_multi([MPoly(f.gens, t, True) for t in groups.values()])


class PlaneCurve:
    """Affine curve {f(x, y) = 0}; parameters other than x, y may appear in f."""

    def __init__(self, f):
        if isinstance(f, RatFunc):
            f = f.num
        if not isinstance(f, MPoly):
            raise CurveError("defining polynomial must be a polynomial in x, y")
        if f.degree("x") <= 0 and f.degree("y") <= 0:
            raise CurveError("defining polynomial is constant in x and y")
        c = _xy_content(f)
        if not c.is_constant():
            f = divexact(f, c)
        self.f = f.stripped()

    @classmethod
    def level(cls, V: RatFunc, h):
        """The level set {V = h} as V1 - h V2 = 0."""
        g = RatFunc(V.num, None, True) - RatFunc(V.den, None, True) * h
        return cls(g.num)

    @property
    def deg_x(self) -> int:
        return self.f.degree("x")

    @property
    def deg_y(self) -> int:
        return self.f.degree("y")

    @property
    def degree(self) -> int:
        """Total degree in x and y."""
        ix = self.f.gens.index("x") if "x" in self.f.gens else None
        iy = self.f.gens.index("y") if "y" in self.f.gens else None
        return max(
            (e[ix] if ix is not None else 0) + (e[iy] if iy is not None else 0)
            for e in self.f.terms
        )

    def __call__(self, x, y):
        return gsubs(self.f, {"x": x, "y": y})

    def contains(self, x, y) -> bool:
        return is_zero(self(x, y))

    def conic_matrix(self):
        """Symmetric 3x3 matrix of a curve of degree <= 2 (entries in the parameters)."""
        if self.degree > 2:
            raise CurveError("not a conic")
        coeff = {}
        for i in range(3):
            for j in range(3 - i):
                coeff[(i, j)] = _coefficient_xy(self.f, i, j)
        A, B, C = coeff[(2, 0)], coeff[(1, 1)], coeff[(0, 2)]
        D, E, F = coeff[(1, 0)], coeff[(0, 1)], coeff[(0, 0)]
        half = Fraction(1, 2)
        return [[A, B * half, D * half], [B * half, C, E * half], [D * half, E * half, F]]

    def is_degenerate_conic(self) -> bool:
        """True when a curve of degree 2 splits into lines (zero 3x3 determinant)."""
        if self.degree != 2:
            return False
        m = self.conic_matrix()
        det = (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
        return is_zero(det)

    def __eq__(self, other):
        return isinstance(other, PlaneCurve) and self.f == other.f

    def __hash__(self):
        return hash(self.f)

    def __str__(self):
        return str(self.f)

    def __repr__(self):
        return f"PlaneCurve({self.f})"


def _coefficient_xy(f: MPoly, i: int, j: int):
    """Coefficient of x^i y^j as a RatFunc in the remaining generators."""
    ix = f.gens.index("x") if "x" in f.gens else None
    iy = f.gens.index("y") if "y" in f.gens else None
    out = {}
    for e, c in f.terms.items():
        ex = e[ix] if ix is not None else 0
        ey = e[iy] if iy is not None else 0
        if ex == i and ey == j:
            ne = list(e)
            if ix is not None:
                ne[ix] = 0
            if iy is not None:
                ne[iy] = 0
            out[tuple(ne)] = c
    p = MPoly(f.gens, out, True).stripped()
    if p.is_constant():
        return p.constant_value()
    return RatFunc(p, None, True)


@dataclass
class Parametrization:
    """t -> (p1(t), p2(t)) with optional inverse (x, y) -> t.

    Components may depend on the fiber value ``h`` and on parameters, and may
    carry one symbolic radical.
    """

    p1: object
    p2: object
    inverse: object = None
    var: str = "t"
    h: object = None
    meta: dict = field(default_factory=dict)

    def __call__(self, t):
        return gsubs(self.p1, {self.var: t}), gsubs(self.p2, {self.var: t})

    def components(self):
        return self.p1, self.p2

    def specialize(self, values: dict) -> "Parametrization":
        inv = None if self.inverse is None else gsubs(self.inverse, values)
        h = values.get("h", self.h)
        return Parametrization(
            gsubs(self.p1, values), gsubs(self.p2, values), inv, self.var, h, dict(self.meta)
        )

    def derivative(self):
        return gdiff(self.p1, self.var), gdiff(self.p2, self.var)

    def on_curve(self, curve: PlaneCurve) -> bool:
        return curve.contains(self.p1, self.p2)

    def is_symbolic_radical(self) -> bool:
        return any(is_radical(c) for c in (self.p1, self.p2, self.inverse))

    def component_degree(self, comp) -> int:
        t = self.var
        if isinstance(comp, RatFunc):
            return max(comp.num.degree(t), comp.den.degree(t), 0)
        if is_radical(comp):
            # over K(sqrt d): p + q sqrt(d) with a common denominator
            p, q = comp.p, comp.q
            g = mgcd(p.den, q.den)
            L = divexact(p.den * q.den, g)
            pn = p.num * divexact(L, p.den)
            qn = q.num * divexact(L, q.den)
            return max(pn.degree(t), qn.degree(t), L.degree(t), 0)
        return 0

    def degree(self) -> int:
        return max(self.component_degree(self.p1), self.component_degree(self.p2))

    def check_inverse(self) -> bool:
        """Q(P(t)) = t as a reduced identity."""
        if self.inverse is None:
            return False
        back = gsubs(self.inverse, {"x": self.p1, "y": self.p2})
        return back == RatFunc.var(self.var)


def conic_base_point(curve: PlaneCurve, x0, real: bool = False):
    """A point (x0, y0) of the curve above x = x0.

    When f(x0, y) is quadratic the root with the ``+`` sign of the square
    root is returned; an irrational discriminant moves y0 into Q(sqrt d), and
    a discriminant depending on parameters gives a symbolic radical.
    """
    g = gsubs(RatFunc(curve.f, None, True), {"x": x0})
    if not isinstance(g, RatFunc) or g.degree("y") <= 0:
        raise CurveError(f"f({x0}, y) is constant in y")
    if g.degree("y") > 2:
        raise CurveError("base point search needs degree <= 2 in y")
    cs = g.num.coeffs_in("y")

    def coeff(k):
        c = cs.get(k)
        if c is None:
            return Fraction(0)
        c = c.stripped()
        return c.constant_value() if c.is_constant() else RatFunc(c, None, True)

    A, B, C = coeff(2), coeff(1), coeff(0)
    if is_zero(A):
        y0 = -C / B
    else:
        disc = B * B - 4 * A * C
        if isinstance(disc, RatFunc) and not disc.is_constant():
            root = radical(disc)
        else:
            if isinstance(disc, RatFunc):
                disc = disc.constant_value()
            if real and not isinstance(disc, QuadNumber) and disc < 0:
                raise CurveError("no real point above x0: negative discriminant")
            try:
                root = exact_sqrt(disc)
            except NoExactSqrt as exc:
                raise CurveError(str(exc)) from exc
        y0 = (root - B) / (2 * A)
    if isinstance(y0, RatFunc) and y0.is_constant():
        y0 = y0.constant_value()
    if not curve.contains(x0, y0):
        raise CurveError("computed base point is not on the curve")
    return x0, y0


def _at(expr, point):
    return gsubs(expr, {"x": point[0], "y": point[1]})


def parametrize_by_lines(curve: PlaneCurve, base) -> Parametrization:
    """Parametrize a conic by the pencil of lines y - y0 = t (x - x0)."""
    if curve.degree != 2:
        raise CurveError("parametrization by lines needs a curve of degree 2")
    if not curve.contains(*base):
        raise CurveError("base point is not on the curve")
    f = RatFunc(curve.f, None, True)
    fx, fy = f.diff("x"), f.diff("y")
    fxx, fxy, fyy = fx.diff("x"), fx.diff("y"), fy.diff("y")
    t = RatFunc.var("t")
    half = Fraction(1, 2)
    f1 = _at(fx, base) + _at(fy, base) * t
    f2 = _at(fxx, base) * half + _at(fxy, base) * t + _at(fyy, base) * half * t * t
    if is_zero(f2):
        raise CurveError("degenerate conic: quadratic part vanishes along the pencil")
    if is_zero(f1):
        raise CurveError("base point is singular; the conic is degenerate")
    u = -f1 / f2
    x0, y0 = base
    p1 = u + x0
    p2 = t * u + y0
    inverse = (RatFunc.var("y") - y0) / (RatFunc.var("x") - x0)
    return Parametrization(p1, p2, inverse, "t", meta={"base": base})


def check_proper(param: Parametrization, curve: PlaneCurve) -> bool:
    """Degree criterion for properness: deg P = max(deg_x f, deg_y f)."""
    return param.degree() == max(curve.deg_x, curve.deg_y)


def _num_den_in_t(comp, var):
    if isinstance(comp, RatFunc):
        return comp.num, comp.den
    if isinstance(comp, MPoly):
        return comp, MPoly.const(1)
    return MPoly.const(comp), MPoly.const(1)


def _primitive_t(p: MPoly, var: str) -> MPoly:
    if p.is_zero() or p.degree(var) <= 0:
        return p
    c = content_in(p, var)
    if c.is_constant():
        return p
    return divexact(p, c)


def invert_parametrization(param: Parametrization, curve: PlaneCurve) -> RatFunc:
    """Inverse t = D0/D1 from the gcd in K(C)[t] of x P12 - P11 and y P22 - P21.

    The remainder sequence runs on pseudo-remainders; every remainder is
    reduced modulo the curve, which is the zero test in K(C), and stripped of
    its content in t.
    """
    if param.is_symbolic_radical():
        raise CurveError("inversion with a symbolic radical needs per-fiber values")
    var = param.var
    if var in curve.f.used_gens():
        raise CurveError(f"curve must not involve the parameter variable {var}")
    n1, d1 = _num_den_in_t(param.p1, var)
    n2, d2 = _num_den_in_t(param.p2, var)
    if n1.degree(var) <= 0 and d1.degree(var) <= 0 or n2.degree(var) <= 0 and d2.degree(var) <= 0:
        raise CurveError("parametrization components must be nonconstant")
    X, Y = MPoly.var("x"), MPoly.var("y")
    H1 = X * d1 - n1
    H2 = Y * d2 - n2
    f = curve.f
    rvar = reduction_var(f)

    def red(p):
        if p.is_zero():
            return p
        r = bipoly_reduce_mod_curve(p, f, rvar)
        return _primitive_t(r, var)

    a, b = red(H1), red(H2)
    if a.degree(var) < b.degree(var):
        a, b = b, a
    while not b.is_zero():
        if b.degree(var) <= 0:
            raise CurveError("gcd in K(C)[t] is constant: parametrization is not proper")
        r = red(prem(a, b, var))
        a, b = b, r
    if a.degree(var) != 1:
        raise CurveError(f"gcd has degree {a.degree(var)} in {var}; expected 1 (improper parametrization)")
    cs = a.coeffs_in(var)
    D1 = cs[1].stripped()
    D0 = -cs.get(0, MPoly.zero()).stripped()
    inv = RatFunc(D0, D1)
    if gsubs(inv, {"x": param.p1, "y": param.p2}) != RatFunc.var(var):
        raise CurveError("computed inverse does not satisfy Q(P(t)) = t")
    return inv


def agree_on_curve(q1, q2, curve: PlaneCurve) -> bool:
    """Two functions agree on the curve: numerator of q1 - q2 vanishes mod f."""
    diff = q1 - q2
    if isinstance(diff, QuadNumber):
        return False
    if not isinstance(diff, RatFunc):
        return is_zero(diff)
    if diff.is_zero():
        return True
    return bipoly_reduce_mod_curve(diff.num, curve.f).is_zero()
