"""Integrable planar maps whose invariant curves are rational.

Each fiber {V = h} is parametrized, the map is read off as a Mobius
transformation of the parameter, and the one-dimensional data (Lie symmetry,
multiplier, rotation number) is pulled back to the plane.
"""

from __future__ import annotations

import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .curves import (
    CurveError,
    Parametrization,
    PlaneCurve,
    conic_base_point,
    invert_parametrization,
    parametrize_by_lines,
)
from .exact import (
    MPoly,
    QuadNumber,
    RatFunc,
    compose,
    gdiff,
    gens_of,
    gfloat,
    gsubs,
    is_radical,
    is_zero,
)
from .exact.scalars import MixedFieldError, downcast
from .mobius import (
    INFINITY,
    Mobius,
    MobiusClass,
    MobiusError,
    classify,
    conjugacy_invariant,
    lie_symmetry_1d,
)

__all__ = [
    "FiberError",
    "PoleError",
    "RationalMapPlane",
    "FiberFamily",
    "IntegrableSystem",
    "PlanarVectorField",
    "ConjugationResult",
    "FixedPoint",
    "FiberReport",
    "verify_first_integral",
    "extract_mobius",
    "lie_symmetry_field",
    "verify_lie_compatibility",
    "measure_density",
    "verify_measure",
    "build_conjugation",
    "suggest_level_correspondence",
    "rotation_profile",
    "theta_at",
    "solve_period_level",
    "period_bound",
    "analyze_fiber",
    "analyze_fibers",
]

H = RatFunc.var("h")
X = RatFunc.var("x")
Y = RatFunc.var("y")
T = RatFunc.var("t")

FLOAT_POINT_TOL = 1e-9


class FiberError(ValueError):
    pass


class PoleError(ZeroDivisionError):
    """A denominator of the map vanished at the evaluation point."""


def _rf(e):
    if isinstance(e, MPoly):
        return RatFunc(e, None, True)
    if isinstance(e, (int, Fraction)):
        return RatFunc.const(e)
    return e


def _is_float(v) -> bool:
    return isinstance(v, (float, complex))


def eval_exact(rf, values: dict):
    """Exact value of a RatFunc at a point; PoleError on a vanishing denominator."""
    if is_radical(rf):
        return gsubs(rf, values)
    rf = _rf(rf)
    if isinstance(rf, RatFunc):
        num = rf.num.evaluate(values)
        den = rf.den.evaluate(values)
        if is_zero(den):
            raise PoleError("denominator vanishes")
        if isinstance(num, (int, Fraction)) and isinstance(den, (int, Fraction)):
            return Fraction(num) / den
        return num / den
    return rf


def eval_float(rf, values: dict) -> complex:
    rf = _rf(rf)
    if isinstance(rf, RatFunc):
        vals = {k: complex(downcast(v)) if not _is_float(v) else complex(v) for k, v in values.items()}
        den = rf.den.eval_float(vals)
        if den == 0:
            raise PoleError("denominator vanishes")
        return rf.num.eval_float(vals) / den
    return gfloat(rf, values)


# ---------------------------------------------------------------------------
# maps and systems


class RationalMapPlane:
    """(x, y) -> (F1, F2) with F1, F2 rational in x, y and parameters."""

    def __init__(self, F1, F2, inverse=None, params=None):
        self.F1 = _rf(F1)
        self.F2 = _rf(F2)
        self.inverse = None if inverse is None else (_rf(inverse[0]), _rf(inverse[1]))
        self.params = dict(params or {})

    @property
    def components(self):
        return self.F1, self.F2

    def __call__(self, x, y):
        vals = {"x": x, "y": y}
        if _is_float(x) or _is_float(y):
            return eval_float(self.F1, vals), eval_float(self.F2, vals)
        return eval_exact(self.F1, vals), eval_exact(self.F2, vals)

    def apply(self, G1, G2):
        """Symbolic composition F o G."""
        vals = {"x": G1, "y": G2}
        return gsubs(self.F1, vals), gsubs(self.F2, vals)

    def jacobian(self):
        return [[self.F1.diff("x"), self.F1.diff("y")], [self.F2.diff("x"), self.F2.diff("y")]]

    def jacobian_det(self):
        (a, b), (c, d) = self.jacobian()
        return a * d - b * c

    def specialize(self, values: dict) -> "RationalMapPlane":
        inv = None
        if self.inverse is not None:
            inv = (gsubs(self.inverse[0], values), gsubs(self.inverse[1], values))
        params = {k: values.get(k, v) for k, v in self.params.items()}
        return RationalMapPlane(gsubs(self.F1, values), gsubs(self.F2, values), inv, params)

    def inverse_verified(self) -> bool:
        """Both F^-1 o F and F o F^-1 reduce to the identity."""
        if self.inverse is None:
            return False
        G1, G2 = self.inverse
        try:
            a = (compose(G1, {"x": self.F1, "y": self.F2}), compose(G2, {"x": self.F1, "y": self.F2}))
            b = (compose(self.F1, {"x": G1, "y": G2}), compose(self.F2, {"x": G1, "y": G2}))
        except ZeroDivisionError:
            return False
        return a == (X, Y) and b == (X, Y)

    def inverse_map(self) -> "RationalMapPlane":
        if self.inverse is None:
            raise FiberError("map has no explicit inverse")
        return RationalMapPlane(self.inverse[0], self.inverse[1], (self.F1, self.F2), self.params)

    def __repr__(self):
        return f"RationalMapPlane(({self.F1}), ({self.F2}))"


@dataclass
class FiberFamily:
    """Closed-form parametrizations P_h(t) of all fibers, symbolic in h.

    Components may involve one radical in h and the parameters.
    """

    p1: object
    p2: object
    inverse: object = None
    var: str = "t"

    @property
    def rational(self) -> bool:
        return not any(is_radical(e) for e in (self.p1, self.p2, self.inverse))

    def symbolic(self) -> Parametrization:
        return Parametrization(self.p1, self.p2, self.inverse, self.var, H)

    def at(self, h) -> Parametrization:
        vals = {"h": h}
        inv = None if self.inverse is None else gsubs(self.inverse, vals)
        return Parametrization(gsubs(self.p1, vals), gsubs(self.p2, vals), inv, self.var, h)

    def specialize(self, values: dict) -> "FiberFamily":
        inv = None if self.inverse is None else gsubs(self.inverse, values)
        return FiberFamily(gsubs(self.p1, values), gsubs(self.p2, values), inv, self.var)


@dataclass(eq=False)
class IntegrableSystem:
    """A map with first integral V = V1/V2 and a description of its fibers.

    ``params`` maps parameter names to values (None while symbolic).
    ``h_range`` is the interval of levels filled with closed rotation fibers
    (endpoints may depend on the parameters), ``base_x`` the abscissa used
    for base points when fibers are parametrized by lines, and
    ``level_hint`` an optional closed form h(theta) used to seed bracketing.
    """

    name: str
    map: RationalMapPlane
    V: RatFunc
    family: FiberFamily | None = None
    params: dict = field(default_factory=dict)
    h_range: tuple | None = None
    base_x: object = None
    level_hint: object = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def V1(self) -> MPoly:
        return self.V.num

    @property
    def V2(self) -> MPoly:
        return self.V.den

    def curve(self, h) -> PlaneCurve:
        return PlaneCurve.level(self.V, h)

    def is_symbolic(self) -> bool:
        return any(v is None for v in self.params.values())

    def specialize(self, **values) -> "IntegrableSystem":
        values = {k: _exact_value(v) for k, v in values.items() if v is not None}
        unknown = set(values) - set(self.params)
        if unknown:
            raise FiberError(f"unknown parameters: {sorted(unknown)}")
        params = dict(self.params)
        params.update(values)

        def sub(e):
            return None if e is None else gsubs(e, values)

        h_range = None if self.h_range is None else tuple(sub(e) for e in self.h_range)
        return IntegrableSystem(
            self.name,
            self.map.specialize(values),
            gsubs(self.V, values),
            None if self.family is None else self.family.specialize(values),
            params,
            h_range,
            sub(self.base_x),
            self.level_hint,
        )

    def interval(self):
        """Numeric admissible interval, or None."""
        if self.h_range is None:
            return None
        lo, hi = self.h_range
        if isinstance(lo, RatFunc) or isinstance(hi, RatFunc):
            raise FiberError("admissible interval depends on unset parameters")
        return lo, hi

    # -- fibers ----------------------------------------------------------
    def parametrization(self, h, method: str = "family") -> Parametrization:
        if method == "family":
            if self.family is None:
                raise FiberError(f"{self.name}: no closed-form fiber family")
            return self.family.at(h)
        if method == "lines":
            curve = self.curve(h)
            base = _find_base_point(curve, self.base_x)
            p = parametrize_by_lines(curve, base)
            p.h = h
            return p
        raise ValueError(f"unknown parametrization method {method!r}")

    def symbolic_mobius(self) -> Mobius | None:
        """M_h with entries rational in h, or None if it cannot be formed."""
        key = "mobius"
        if key not in self._cache:
            m = None
            if self.family is not None:
                try:
                    m = extract_mobius(self, self.family.symbolic())
                except (FiberError, MobiusError, CurveError):
                    m = None
            self._cache[key] = m
        return self._cache[key]

    def mobius_at(self, h, method: str = "family") -> Mobius:
        """M at level h; the symbolic form is substituted when available."""
        m = self.symbolic_mobius() if method == "family" else None
        if m is not None:
            return m.subs({"h": h})
        if _is_float(h):
            raise FiberError("per-fiber extraction needs an exact level")
        return extract_mobius(self, self.parametrization(h, method))


def _exact_value(v):
    if isinstance(v, str):
        from .parser import parse_scalar

        return parse_scalar(v)
    if isinstance(v, int) and not isinstance(v, bool):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(repr(v))
    return v


_BASE_CANDIDATES = [Fraction(n) for n in (0, 1, -1, 2, -2, 3, -3)] + [Fraction(1, 2), Fraction(-1, 2)]


def _find_base_point(curve: PlaneCurve, preferred=None):
    cands = ([preferred] if preferred is not None else []) + _BASE_CANDIDATES
    last = None
    for x0 in cands:
        try:
            base = conic_base_point(curve, x0)
            parametrize_by_lines(curve, base)
            return base
        except (CurveError, ZeroDivisionError, MixedFieldError) as exc:
            last = exc
    raise FiberError(f"no usable base point found: {last}")


@dataclass
class PlanarVectorField:
    X1: RatFunc
    X2: RatFunc

    @property
    def components(self):
        return self.X1, self.X2

    def __call__(self, x, y):
        vals = {"x": x, "y": y}
        if _is_float(x) or _is_float(y):
            return eval_float(self.X1, vals), eval_float(self.X2, vals)
        return eval_exact(self.X1, vals), eval_exact(self.X2, vals)

    def negated_second(self) -> "PlanarVectorField":
        return PlanarVectorField(self.X1, -self.X2)

    def __str__(self):
        return f"({self.X1}, {self.X2})"


# ---------------------------------------------------------------------------
# first integral and Mobius extraction


def verify_first_integral(sys: IntegrableSystem) -> bool:
    """V o F = V as reduced rational functions."""
    try:
        VF = compose(sys.V, {"x": sys.map.F1, "y": sys.map.F2})
    except ZeroDivisionError as exc:
        raise FiberError("composition V o F hits a zero denominator") from exc
    return VF == sys.V


def extract_mobius(sys: IntegrableSystem, param: Parametrization) -> Mobius:
    """M = P^-1 o F o P, read off as a Mobius map in the parameter."""
    Q = param.inverse
    if Q is None:
        level = H if param.h is None else param.h
        Q = invert_parametrization(param, sys.curve(level))
        param.inverse = Q
    fx, fy = sys.map.apply(param.p1, param.p2)
    m = gsubs(Q, {"x": fx, "y": fy})
    if is_radical(m):
        raise FiberError(f"{sys.name}: P^-1 o F o P still depends on sqrt({m.d})")
    stray = gens_of(m) & {"x", "y"}
    if stray:
        raise FiberError(f"{sys.name}: P^-1 o F o P depends on {sorted(stray)}")
    try:
        return Mobius.from_ratfunc(m, param.var)
    except MobiusError as exc:
        raise FiberError(
            f"{sys.name}: P^-1 o F o P is not a Mobius map ({exc}); "
            "check the first integral, the fiber and properness of P"
        ) from exc


def _y_expr(m: Mobius, var: str = "t"):
    coeffs = lie_symmetry_1d(m).coeffs
    t = RatFunc.var(var)
    out = RatFunc.const(0)
    for k, c in enumerate(coeffs):
        out = out + t**k * c
    return out


def _pull_back(e, Q, V):
    """e(t, h) at t = Q(x, y), h = V(x, y); a radical part must cancel."""
    e = gsubs(e, {"t": Q})
    if is_radical(e):
        if not compose(e.q, {"h": V}).is_zero():
            raise FiberError("the radical does not cancel after h = V: non-rational h-dependence")
        e = e.p
    return compose(_rf(e), {"h": V})


def lie_symmetry_field(sys: IntegrableSystem, family: FiberFamily | None = None) -> PlanarVectorField:
    """X = DP_h(P_h^-1) Y_h(P_h^-1) evaluated at h = V."""
    fam = family or sys.family
    if fam is None:
        raise FiberError(f"{sys.name}: a closed-form fiber family is needed; use per-fiber mode")
    P = fam.symbolic()
    if P.inverse is None:
        if not fam.rational:
            raise FiberError("inverse of a radical family must be supplied")
        P.inverse = invert_parametrization(P, sys.curve(H))
    if family is None:
        M = sys.symbolic_mobius()
        if M is None:
            M = extract_mobius(sys, P)
    else:
        M = extract_mobius(sys, P)
    Yt = _y_expr(M, P.var)
    comps = []
    for p in (P.p1, P.p2):
        comps.append(_pull_back(gdiff(p, P.var) * Yt, P.inverse, sys.V))
    return PlanarVectorField(*comps)


def _free_gens(*exprs) -> list:
    gs = set()
    for e in exprs:
        gs |= gens_of(e)
    from .exact import gen_key

    return sorted(gs, key=gen_key)


def verify_lie_compatibility(Xf: PlanarVectorField, F: RationalMapPlane, mode="symbolic",
                             n: int = 20, seed: int = 0) -> bool:
    """X(F(p)) = DF(p) X(p), symbolically or at ``n`` random rational points."""
    J = F.jacobian()
    if mode == "symbolic":
        XF = [compose(c, {"x": F.F1, "y": F.F2}) for c in Xf.components]
        DX = [J[i][0] * Xf.X1 + J[i][1] * Xf.X2 for i in range(2)]
        return XF[0] == DX[0] and XF[1] == DX[1]
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    gens = _free_gens(Xf.X1, Xf.X2, F.F1, F.F2)
    checked = 0
    attempts = 0
    while checked < n and attempts < 50 * n:
        attempts += 1
        vals = {g: Fraction(rng.randint(-40, 40), rng.randint(1, 12)) for g in gens}
        try:
            p = F(vals["x"], vals["y"]) if not (set(gens) - {"x", "y"}) else (
                eval_exact(F.F1, vals), eval_exact(F.F2, vals))
            at_p = {**vals, "x": p[0], "y": p[1]}
            lhs = (eval_exact(Xf.X1, at_p), eval_exact(Xf.X2, at_p))
            x1, x2 = eval_exact(Xf.X1, vals), eval_exact(Xf.X2, vals)
            rhs = tuple(eval_exact(J[i][0], vals) * x1 + eval_exact(J[i][1], vals) * x2 for i in range(2))
        except ZeroDivisionError:
            continue
        if lhs != rhs:
            return False
        checked += 1
    if checked == 0:
        raise FiberError("every sample point hit a pole")
    return True


def verify_measure(mu, F: RationalMapPlane) -> bool:
    """mu o F = det(DF) mu."""
    muF = compose(_rf(mu), {"x": F.F1, "y": F.F2})
    return muF == F.jacobian_det() * mu


def measure_density(Xf: PlanarVectorField, sys: IntegrableSystem):
    """mu with X = mu (-V_y, V_x); the invariant density is 1/mu."""
    Vx, Vy = sys.V.diff("x"), sys.V.diff("y")
    mus = []
    if not Vy.is_zero():
        mus.append(-Xf.X1 / Vy)
    if not Vx.is_zero():
        mus.append(Xf.X2 / Vx)
    if not mus:
        raise FiberError("V is constant")
    if len(mus) == 2 and mus[0] != mus[1]:
        raise FiberError("X is not tangent to the fibers: -X1/V_y and X2/V_x differ")
    mu = mus[0]
    if not verify_measure(mu, sys.map):
        raise FiberError("mu o F = det(DF) mu fails")
    return mu


# ---------------------------------------------------------------------------
# conjugations


@dataclass
class ConjugationResult:
    f: RatFunc
    f_inv: RatFunc
    m: Mobius
    psi: tuple
    psi_inv: tuple
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def diagnostic(self) -> str:
        bad = [k for k, v in self.checks.items() if not v]
        return "all identities hold" if not bad else "failed: " + ", ".join(bad)


def _mobius_in_h(f) -> Mobius:
    try:
        return Mobius.from_ratfunc(_rf(f), "h")
    except MobiusError as exc:
        raise FiberError(f"level correspondence {f} is not invertible as a Mobius map in h") from exc


def _family_inverse(sys: IntegrableSystem):
    fam = sys.family
    if fam is None:
        raise FiberError(f"{sys.name}: no closed-form fiber family")
    if fam.inverse is not None:
        return fam.inverse
    return invert_parametrization(fam.symbolic(), sys.curve(H))


def build_conjugation(sysF: IntegrableSystem, sysG: IntegrableSystem, f, m_family: Mobius,
                      f_inv=None) -> ConjugationResult:
    """Psi = P^G_{f(h)} o m_h o (P^F_h)^-1 at h = V_F, and its inverse."""
    f = _rf(f)
    if f_inv is None:
        f_inv = _mobius_in_h(f).inverse().to_ratfunc("h")
    f_inv = _rf(f_inv)
    QF, QG = _family_inverse(sysF), _family_inverse(sysG)
    checks = {}
    M, N = sysF.symbolic_mobius(), sysG.symbolic_mobius()
    if M is not None and N is not None:
        Nf = N.subs({"h": f})
        holds = m_family.inverse() @ Nf @ m_family == M
        if not holds and m_family @ Nf @ m_family.inverse() == M:
            # m given in the opposite orientation
            m_family = m_family.inverse()
            holds = True
            checks["m orientation flipped"] = True
        checks["M = m^-1 o N_f o m"] = holds
    m_rf = m_family.to_ratfunc("t")
    minv_rf = m_family.inverse().to_ratfunc("t")
    VF, VG = sysF.V, sysG.V

    QF_x = compose(_rf(QF), {"h": VF})
    psi = []
    for p in (sysG.family.p1, sysG.family.p2):
        e = compose(_rf(p), {"t": m_rf, "h": f})
        psi.append(compose(e, {"t": QF_x, "h": VF}))
    hG = compose(f_inv, {"h": VG})
    QG_x = compose(_rf(QG), {"h": VG})
    psi_inv = []
    for p in (sysF.family.p1, sysF.family.p2):
        e = compose(_rf(p), {"t": minv_rf})
        psi_inv.append(compose(e, {"t": QG_x, "h": hG}))

    def comp(pair, at):
        return tuple(compose(c, {"x": at[0], "y": at[1]}) for c in pair)

    try:
        checks["psi_inv o psi = id"] = comp(psi_inv, psi) == (X, Y)
    except ZeroDivisionError:
        checks["psi_inv o psi = id"] = False
    try:
        checks["psi o F = G o psi"] = comp(psi, sysF.map.components) == comp(sysG.map.components, psi)
    except ZeroDivisionError:
        checks["psi o F = G o psi"] = False
    try:
        checks["V_G o psi = f o V_F"] = compose(VG, {"x": psi[0], "y": psi[1]}) == compose(f, {"h": VF})
    except ZeroDivisionError:
        checks["V_G o psi = f o V_F"] = False
    return ConjugationResult(f, f_inv, m_family, tuple(psi), tuple(psi_inv), checks)


def suggest_level_correspondence(sysF: IntegrableSystem, sysG: IntegrableSystem):
    """k = f(h) from conjugacy_invariant(M_h) = conjugacy_invariant(N_k).

    Returns None when the equation is not of degree one in k.
    """
    M, N = sysF.symbolic_mobius(), sysG.symbolic_mobius()
    if M is None or N is None:
        return None
    IF = _rf(conjugacy_invariant(M))
    IG = compose(_rf(conjugacy_invariant(N)), {"h": RatFunc.var("k")})
    eq = (IG - IF).num
    if eq.degree("k") != 1:
        return None
    cs = eq.coeffs_in("k")
    c1 = cs[1].stripped()
    c0 = cs.get(0, MPoly.zero()).stripped()
    return RatFunc(-c0, None, True) / RatFunc(c1, None, True)


# ---------------------------------------------------------------------------
# rotation numbers and periods


def theta_at(sys: IntegrableSystem, h):
    """Rotation number of the fiber at h, or None if it is not a rotation."""
    cls = classify(sys.mobius_at(h))
    return cls.theta if cls.kind == "rotation" else None


def rotation_profile(sys: IntegrableSystem, hs) -> list:
    """[(h, theta(h))]; theta is None for samples that are not rotations."""
    out = []
    for h in hs:
        try:
            th = theta_at(sys, h)
        except (MobiusError, FiberError):
            th = None
        out.append((h, th))
    return out


def _float(v) -> float:
    return complex(downcast(v)).real if not _is_float(v) else complex(v).real


def solve_period_level(sys: IntegrableSystem, target, grid: int = 64, tol: float = 1e-12):
    """Level h with theta(h) = target, by bisection on the admissible interval.

    The profile is checked for strict monotonicity on ``grid`` + 1 points;
    None is returned when the target lies outside its image.
    """
    target = Fraction(target)
    interval = sys.interval()
    if interval is None:
        raise FiberError(f"{sys.name}: no admissible interval declared")
    lo, hi = (_float(v) for v in interval)
    span = hi - lo
    eps = 1e-9 * span
    hs = [lo + eps] + [lo + span * i / grid for i in range(1, grid)] + [hi - eps]
    thetas = []
    for h in hs:
        th = theta_at(sys, h)
        if th is None:
            raise FiberError(f"fiber at h = {h} is not a rotation")
        thetas.append(th)
    diffs = [b - a for a, b in zip(thetas, thetas[1:])]
    if not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
        raise FiberError("rotation-number profile is not monotone on the grid")
    tv = float(target)
    if not (min(thetas) <= tv <= max(thetas)):
        return None
    a, b = None, None
    if sys.level_hint is not None:
        guess = sys.level_hint(target)
        if guess is not None and lo < guess < hi:
            # tight bracket around the closed form
            w = 1e-6 * span
            ga, gb = max(lo + eps, guess - w), min(hi - eps, guess + w)
            ta, tb = theta_at(sys, ga), theta_at(sys, gb)
            if ta is not None and tb is not None and (ta - tv) * (tb - tv) <= 0:
                a, b = ga, gb
    if a is None:
        for i in range(len(hs) - 1):
            if (thetas[i] - tv) * (thetas[i + 1] - tv) <= 0:
                a, b = hs[i], hs[i + 1]
                break
    fa = theta_at(sys, a) - tv
    for _ in range(200):
        mid = (a + b) / 2
        fm = theta_at(sys, mid) - tv
        if abs(fm) < tol or b - a < 1e-15 * max(1.0, abs(mid)):
            return mid
        if (fa < 0) == (fm < 0):
            a, fa = mid, fm
        else:
            b = mid
    return (a + b) / 2


def period_bound(sys: IntegrableSystem):
    """(theta_a, p_min): rotation number at the lower end of the admissible
    interval and the least period E(1/(1 - theta_a)) + 1 of the fibers inside."""
    interval = sys.interval()
    if interval is None:
        raise FiberError(f"{sys.name}: no admissible interval declared")
    cls = classify(sys.mobius_at(interval[0]))
    if cls.kind != "rotation":
        raise FiberError("lower end of the interval is not a rotation level")
    theta_a = cls.theta_exact if cls.theta_exact is not None else cls.theta
    if theta_a == 1:
        raise FiberError("theta_a = 1 gives no bound")
    q = 1 / (1 - theta_a)
    return theta_a, int(math.floor(q)) + 1


# ---------------------------------------------------------------------------
# per-fiber reports


@dataclass
class FixedPoint:
    t: object
    point: tuple | None
    at_infinity: bool
    exact: bool
    verified: bool | None = None


@dataclass
class FiberReport:
    h: object
    status: str
    curve: PlaneCurve | None = None
    param: Parametrization | None = None
    mobius: Mobius | None = None
    mclass: MobiusClass | None = None
    fixed_points: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)
    message: str = ""

    @property
    def kind(self):
        return self.mclass.kind if self.mclass is not None else None

    @property
    def theta(self):
        return self.mclass.theta if self.mclass is not None else None

    @property
    def period(self):
        return self.mclass.order if self.mclass is not None else None

    def to_dict(self) -> dict:
        from .serialize import expr_str, scalar_json

        d = {"h": scalar_json(self.h), "status": self.status}
        if self.message:
            d["message"] = self.message
        if self.curve is not None:
            d["curve"] = expr_str(self.curve.f)
        if self.param is not None:
            d["parametrization"] = [expr_str(self.param.p1), expr_str(self.param.p2)]
            if self.param.inverse is not None:
                d["inverse"] = expr_str(self.param.inverse)
        if self.mobius is not None:
            d["mobius"] = {k: scalar_json(v) for k, v in zip("abcd", self.mobius.entries)}
            d["mobius_expr"] = str(self.mobius)
        c = self.mclass
        if c is not None:
            d["class"] = c.kind
            d["delta"] = scalar_json(c.delta)
            d["xi"] = scalar_json(c.xi)
            d["fixed_parameters"] = [scalar_json(t) for t in c.fixed_points]
            if c.kind == "rotation":
                d["theta"] = scalar_json(c.theta)
                if c.theta_exact is not None:
                    d["theta_exact"] = str(c.theta_exact)
                d["period"] = c.order
            if c.kind == "parabolic":
                d["kappa"] = scalar_json(c.kappa)
        if self.fixed_points:
            d["fixed_points"] = [
                {
                    "t": scalar_json(fp.t),
                    "at_infinity": fp.at_infinity,
                    "point": None if fp.point is None else [scalar_json(v) for v in fp.point],
                    "exact": fp.exact,
                    "verified": fp.verified,
                }
                for fp in self.fixed_points
            ]
        d["verdicts"] = dict(self.verdicts)
        return d


def _limit_at_infinity(comp, var):
    comp = _rf(comp)
    n, d = comp.num, comp.den
    dn, dd = n.degree(var), d.degree(var)
    if dn > dd:
        return INFINITY
    if dn < dd:
        return Fraction(0)
    ln = n.lead_in(var).stripped()
    ld = d.lead_in(var).stripped()
    return eval_exact(RatFunc(ln, None, True), {}) / eval_exact(RatFunc(ld, None, True), {})


def _param_point(param: Parametrization, t):
    """(point, exact) for P(t); point None when P has a pole at t."""
    var = param.var
    comps = []
    exact = True
    for c in param.components():
        if t is INFINITY:
            v = _limit_at_infinity(c, var)
            if v is INFINITY:
                return None, True
            comps.append(v)
            continue
        c = _rf(c)
        try:
            den = c.den.evaluate({var: t})
            if is_zero(den):
                return None, True
            comps.append(c.num.evaluate({var: t}) / den)
        except MixedFieldError:
            exact = False
            den = c.den.eval_float({var: complex(downcast(t))})
            if abs(den) < 1e-12:
                return None, False
            comps.append(c.num.eval_float({var: complex(downcast(t))}) / den)
    if not exact:
        comps = [complex(downcast(v)) if not _is_float(v) else v for v in comps]
    return tuple(_scalar(v) for v in comps), exact


def _scalar(v):
    if isinstance(v, RatFunc) and v.is_constant():
        return v.constant_value()
    if isinstance(v, MPoly) and v.is_constant():
        return v.constant_value()
    return v


def _check_fixed(F: RationalMapPlane, pt, exact):
    try:
        img = F(*pt)
    except ZeroDivisionError:
        return False
    if exact:
        return img[0] == pt[0] and img[1] == pt[1]
    return max(abs(complex(img[i]) - complex(pt[i])) for i in range(2)) < FLOAT_POINT_TOL * (
        1 + max(abs(complex(v)) for v in pt))


def analyze_fiber(sys: IntegrableSystem, h, method: str = "family") -> FiberReport:
    """Full analysis of one fiber; degenerate fibers get status "degenerate"."""
    h = _exact_value(h)
    try:
        curve = sys.curve(h)
    except CurveError as exc:
        return FiberReport(h, "degenerate", message=str(exc))
    if curve.degree == 2 and curve.is_degenerate_conic():
        return FiberReport(h, "degenerate", curve, message="level curve splits into lines")
    try:
        param = sys.parametrization(h, method)
        if param.inverse is None:
            param.inverse = invert_parametrization(param, curve)
        mob = extract_mobius(sys, param)
    except (FiberError, CurveError, ZeroDivisionError) as exc:
        return FiberReport(h, "error", curve, message=str(exc))
    rep = FiberReport(h, "ok", curve, param, mob)
    rep.verdicts["on_curve"] = param.on_curve(curve)
    if mob.is_identity():
        rep.status = "identity"
        return rep
    try:
        cls = classify(mob)
    except MobiusError as exc:
        rep.status = "error"
        rep.message = str(exc)
        return rep
    rep.mclass = cls
    roots_ok = True
    for t in cls.fixed_points:
        if t is INFINITY:
            continue
        a, b, c, d = mob.entries
        try:
            r = c * t * t + (d - a) * t - b
            roots_ok &= (abs(r) < 1e-9) if _is_float(r) else is_zero(r)
        except MixedFieldError:
            pass
    rep.verdicts["fixed_parameters"] = bool(roots_ok)
    for t in cls.fixed_points:
        pt, exact = _param_point(param, t)
        if pt is None:
            rep.fixed_points.append(FixedPoint(t, None, True, exact))
        else:
            rep.fixed_points.append(FixedPoint(t, pt, False, exact, _check_fixed(sys.map, pt, exact)))
    rep.verdicts["fixed_points"] = all(fp.verified is not False for fp in rep.fixed_points)
    return rep


def _threads() -> int:
    env = os.environ.get("GENUS0_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def analyze_fibers(sys: IntegrableSystem, hs, method: str = "family", threads: int | None = None) -> list:
    """analyze_fiber over a grid; results keep the order of ``hs``."""
    hs = list(hs)
    if not hs:
        return []
    n = threads or _threads()
    # the symbolic Mobius map is shared by all fibers
    if method == "family":
        sys.symbolic_mobius()
    if n <= 1 or len(hs) == 1:
        return [analyze_fiber(sys, h, method) for h in hs]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(lambda h: analyze_fiber(sys, h, method), hs))
