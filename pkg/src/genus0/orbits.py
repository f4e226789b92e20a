"""Orbit iteration, period detection and numerical checks of fiber predictions."""

from __future__ import annotations

import cmath
import csv
import io
import math
import random
from dataclasses import dataclass, field
from decimal import Context, Decimal
from fractions import Fraction

from .exact import MPoly, QuadNumber, RatFunc, gsubs, is_radical
from .exact.scalars import downcast
from .fibered_dynamics import (
    FiberReport,
    IntegrableSystem,
    PoleError,
    RationalMapPlane,
    eval_exact,
)
from .mobius import INFINITY, classify

__all__ = [
    "DIVERGENCE_BOUND",
    "PERIOD_TOL",
    "ROTATION_TOL",
    "Orbit",
    "Verdict",
    "iterate",
    "detect_period",
    "estimate_rotation_number",
    "verify_fiber_prediction",
    "fiber_point",
    "orbit_csv",
    "write_csv",
    "conserves",
    "shadowing_holds",
]

DIVERGENCE_BOUND = 1e12
PERIOD_TOL = 1e-8
ROTATION_TOL = 1e-6
PERIOD_CAP = 200


# ---------------------------------------------------------------------------
# fast float evaluation


class _FloatRat:
    """Float evaluator for a RatFunc whose generators all get numeric values."""

    def __init__(self, rf, fixed=None):
        if isinstance(rf, MPoly):
            rf = RatFunc(rf, None, True)
        self.num = self._compile(rf.num)
        self.den = self._compile(rf.den)
        self.fixed = {k: complex(downcast(v)) if not isinstance(v, (float, complex)) else v
                      for k, v in (fixed or {}).items()}

    @staticmethod
    def _compile(p: MPoly):
        terms = []
        for e, c in p.terms.items():
            z = complex(downcast(c))
            coef = z.real if z.imag == 0 else z
            terms.append((coef, [(g, k) for g, k in zip(p.gens, e) if k]))
        return terms

    def _poly(self, terms, vals):
        total = 0.0
        for coef, mono in terms:
            term = coef
            for g, k in mono:
                term *= vals[g] ** k
            total += term
        return total

    def __call__(self, vals):
        if self.fixed:
            vals = {**self.fixed, **vals}
        den = self._poly(self.den, vals)
        if den == 0:
            raise PoleError("denominator vanishes")
        return self._poly(self.num, vals) / den


class _FloatExpr:
    """Float evaluator for an expression that may carry one radical."""

    def __init__(self, e, fixed=None):
        self.radical = is_radical(e)
        if self.radical:
            self.p = _FloatRat(e.p, fixed)
            self.q = _FloatRat(e.q, fixed)
            self.d = _FloatRat(e.d, fixed)
        else:
            self.p = _FloatRat(e, fixed)

    def __call__(self, vals):
        if not self.radical:
            return self.p(vals)
        return self.p(vals) + self.q(vals) * cmath.sqrt(self.d(vals))


def _as_float(v):
    if isinstance(v, float):
        return v
    if isinstance(v, complex):
        return v.real if v.imag == 0 else v
    z = complex(downcast(v))
    return z.real if z.imag == 0 else z


def _clean(z):
    if isinstance(z, complex) and z.imag == 0:
        return z.real
    return z


# ---------------------------------------------------------------------------
# orbits


@dataclass
class Orbit:
    """Consecutive iterates p0, F(p0), ...

    ``status`` is "completed", "pole" (a denominator vanished when applying F
    at step ``stop``), "diverged" (float coordinates beyond the bound) or
    "period" (iteration stopped at the first exact return).
    """

    p0: tuple
    points: list
    mode: str
    status: str = "completed"
    stop: int | None = None
    period: int | None = None

    @property
    def steps(self) -> int:
        return len(self.points) - 1

    @property
    def exact(self) -> bool:
        return self.mode != "float"


def _mode_of(p0) -> str:
    if any(isinstance(v, (float, complex)) for v in p0):
        return "float"
    if any(isinstance(v, QuadNumber) for v in p0):
        return "exact-quadratic"
    return "exact-rational"


def _normalize_exact(v):
    if isinstance(v, int) and not isinstance(v, bool):
        return Fraction(v)
    if isinstance(v, RatFunc) and v.is_constant():
        return v.constant_value()
    return v


class _FloatMap:
    def __init__(self, F: RationalMapPlane):
        self.f1 = _FloatRat(F.F1)
        self.f2 = _FloatRat(F.F2)

    def __call__(self, x, y):
        vals = {"x": x, "y": y}
        return _clean(self.f1(vals)), _clean(self.f2(vals))


def iterate(F: RationalMapPlane, p0, n: int, mode: str | None = None, bound: float = DIVERGENCE_BOUND,
            stop_on_return: bool = False) -> Orbit:
    """Apply F up to n times.

    Iteration stops with status "pole" when a denominator vanishes and, in
    float mode, with "diverged" once a coordinate exceeds ``bound``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    mode = mode or _mode_of(p0)
    if mode == "float":
        pt = tuple(_as_float(v) for v in p0)
        step = _FloatMap(F)
    else:
        pt = tuple(_normalize_exact(v) for v in p0)
        step = F
    orbit = Orbit(tuple(pt), [pt], mode)
    for k in range(n):
        try:
            nxt = step(*pt)
        except ZeroDivisionError:
            orbit.status, orbit.stop = "pole", k
            return orbit
        if mode == "float":
            if any(abs(v) > bound or v != v for v in nxt):
                orbit.points.append(nxt)
                orbit.status, orbit.stop = "diverged", k + 1
                return orbit
        else:
            nxt = tuple(_normalize_exact(v) for v in nxt)
        orbit.points.append(nxt)
        pt = nxt
        if stop_on_return and mode != "float" and nxt == orbit.points[0]:
            orbit.status, orbit.stop, orbit.period = "period", k + 1, k + 1
            return orbit
    return orbit


def _dist(p, q) -> float:
    return max(abs(complex(_as_float(a)) - complex(_as_float(b))) for a, b in zip(p, q))


def detect_period(orbit: Orbit, tol: float = PERIOD_TOL):
    """Smallest p with F^p(p0) = p0 (exactly, or within tol re-checked at 2p, 3p)."""
    pts = orbit.points
    n = len(pts) - 1
    p0 = pts[0]
    if orbit.exact:
        for p in range(1, n // 2 + 1):
            if pts[p] == p0:
                return p
        return None
    for p in range(1, n // 3 + 1):
        if _dist(pts[p], p0) < tol and _dist(pts[2 * p], p0) < tol and _dist(pts[3 * p], p0) < tol:
            return p
    return None


def fiber_point(sys: IntegrableSystem, h, t):
    """P_h(t) from the closed-form family; exact when h and t are exact."""
    fam = sys.family
    if isinstance(h, (float, complex)) or isinstance(t, (float, complex)):
        vals = {"h": h, "t": t}
        return tuple(_clean(_FloatExpr(c)(vals)) for c in (fam.p1, fam.p2))
    vals = {"h": h, "t": t}
    return tuple(_normalize_exact(eval_exact(c, vals)) for c in (fam.p1, fam.p2))


def _level(sys: IntegrableSystem, p0):
    if any(isinstance(v, (float, complex)) for v in p0):
        return _clean(_FloatRat(sys.V)({"x": p0[0], "y": p0[1]}))
    return _normalize_exact(eval_exact(sys.V, {"x": p0[0], "y": p0[1]}))


def estimate_rotation_number(sys: IntegrableSystem, p0, n: int = 10_000, h=None) -> float:
    """Mean of arg(w_{k+1}/w_k)/(2 pi) along a float orbit, in [0, 1).

    w = (t - t0)/(t - t1) with t = P_h^-1 of the iterate and t0, t1 the
    fixed points of M_h.
    """
    if h is None:
        h = _level(sys, p0)
    cls = classify(sys.mobius_at(h))
    if cls.kind != "rotation":
        raise ValueError(f"fiber at h = {h} is not of rotation type ({cls.kind})")
    Q = _FloatExpr(sys.family.inverse, {"h": h})
    orbit = iterate(sys.map, tuple(_as_float(v) for v in p0), n, mode="float")
    if orbit.status != "completed":
        raise ValueError(f"orbit left the good set ({orbit.status} at step {orbit.stop})")
    t0 = None if cls.t0 is INFINITY else complex(downcast(cls.t0))
    t1 = None if cls.t1 is INFINITY else complex(downcast(cls.t1))

    def w(pt):
        t = complex(Q({"x": pt[0], "y": pt[1]}))
        if t1 is None:
            return t - t0
        if t0 is None:
            return 1 / (t - t1)
        return (t - t0) / (t - t1)

    ws = [w(pt) for pt in orbit.points]
    total = 0.0
    for a, b in zip(ws, ws[1:]):
        total += cmath.phase(b / a)
    return (total / n / (2 * math.pi)) % 1.0


# ---------------------------------------------------------------------------
# prediction checks


@dataclass
class Verdict:
    ok: bool
    kind: str
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)


def _random_starts(report: FiberReport, trials: int, rng: random.Random):
    param = report.param
    starts = []
    attempts = 0
    while len(starts) < trials and attempts < 50 * trials:
        attempts += 1
        t = Fraction(rng.randint(-300, 300), rng.randint(1, 100))
        try:
            vals = {param.var: t}
            pt = tuple(_normalize_exact(eval_exact(c, vals)) for c in param.components())
        except ZeroDivisionError:
            continue
        starts.append((t, pt))
    return starts


def _converges(F, start, target, steps, tol):
    orbit = iterate(F, tuple(_as_float(v) for v in start), steps, mode="float")
    dists = [_dist(p, target) for p in orbit.points]
    reached = next((k for k, d in enumerate(dists) if d < tol), None)
    return orbit.status, dists[0], dists[-1], reached


def verify_fiber_prediction(report: FiberReport, sys: IntegrableSystem, trials: int = 20,
                            steps: int = 1000, tol: float = PERIOD_TOL, seed: int = 0) -> Verdict:
    """Compare the predicted dynamics of a fiber with sampled orbits."""
    if report.mclass is None or report.param is None:
        return Verdict(False, report.status, failures=[f"fiber not analyzable: {report.message}"])
    kind = report.kind
    rng = random.Random(seed)
    starts = _random_starts(report, trials, rng)
    v = Verdict(True, kind, {"starts": len(starts)})
    if not starts:
        v.ok = False
        v.failures.append("no start points on the fiber")
        return v

    if kind == "hyperbolic":
        att = report.fixed_points[0]
        rep = report.fixed_points[1]
        if att.at_infinity:
            v.details["attractor"] = "at infinity"
        else:
            target = tuple(_as_float(c) for c in att.point)
            v.details["attractor"] = [str(c) for c in att.point]
            worst = 0.0
            for t, pt in starts:
                if pt == att.point or (not rep.at_infinity and pt == rep.point):
                    continue
                status, d0, d1, reached = _converges(sys.map, pt, target, steps, tol)
                worst = max(worst, d1)
                if status != "completed" or reached is None:
                    v.failures.append(f"start t={t}: distance {d1:.3e} after {steps} steps ({status})")
            v.details["max_final_distance"] = worst
        if not rep.at_infinity and sys.map.inverse is not None:
            target = tuple(_as_float(c) for c in rep.point)
            Finv = sys.map.inverse_map()
            for t, pt in starts[: max(3, trials // 4)]:
                if pt == rep.point or (not att.at_infinity and pt == att.point):
                    continue
                status, d0, d1, reached = _converges(Finv, pt, target, steps, tol)
                if status == "completed" and reached is None:
                    v.failures.append(f"start t={t}: backward orbit misses the repeller ({d1:.3e})")
    elif kind == "parabolic":
        # in the parameter, 1/(t_n - t0) = 1/(t_0 - t0) + n kappa
        cls = report.mclass
        M = report.mobius
        for t, pt in starts:
            if cls.t0 is INFINITY:
                tn = t
                for _ in range(steps):
                    tn = M(tn)
                expect = t + steps * cls.kappa
                if tn != expect:
                    v.failures.append(f"start t={t}: translation length mismatch")
                continue
            if t == cls.t0:
                continue
            orbit = iterate(sys.map, tuple(_as_float(c) for c in pt), min(steps, 200), mode="float")
            if orbit.status != "completed":
                v.failures.append(f"start t={t}: {orbit.status}")
                continue
            Q = _FloatExpr(report.param.inverse)
            t0 = complex(downcast(cls.t0))
            kap = complex(downcast(cls.kappa))
            inv0 = 1 / (complex(downcast(t)) - t0)
            for k in (10, 50, len(orbit.points) - 1):
                tk = complex(Q({"x": orbit.points[k][0], "y": orbit.points[k][1]}))
                if abs(1 / (tk - t0) - (inv0 + k * kap)) > 1e-6 * (1 + abs(inv0) + k * abs(kap)):
                    v.failures.append(f"start t={t}: parabolic drift mismatch at step {k}")
                    break
            if not report.fixed_points[0].at_infinity:
                target = tuple(_as_float(c) for c in report.fixed_points[0].point)
                d = [_dist(p, target) for p in orbit.points]
                if not d[-1] < d[0]:
                    v.failures.append(f"start t={t}: no approach to the fixed point")
    elif kind == "rotation":
        order = report.period
        for t, pt in starts[: min(len(starts), 5)]:
            if order is not None:
                orbit = iterate(sys.map, pt, 3 * order)
                if orbit.status != "completed":
                    v.failures.append(f"start t={t}: {orbit.status}")
                    continue
                p = detect_period(orbit)
                if p != order:
                    v.failures.append(f"start t={t}: period {p}, expected {order}")
            else:
                orbit = iterate(sys.map, tuple(_as_float(c) for c in pt), 3 * PERIOD_CAP, mode="float")
                if orbit.status != "completed":
                    continue
                p = detect_period(orbit, tol)
                if p is not None:
                    v.failures.append(f"start t={t}: unexpected period {p}")
        v.details["period"] = order
    v.ok = not v.failures
    return v


# ---------------------------------------------------------------------------
# invariants along orbits


def conserves(orbit: Orbit, V, tol: float = 1e-9) -> bool:
    """V is constant along the orbit (exactly, or within tol (1 + |V(p0)|))."""
    if orbit.exact:
        vals = [eval_exact(V, {"x": p[0], "y": p[1]}) for p in orbit.points]
        return all(v == vals[0] for v in vals)
    f = _FloatRat(V)
    vals = [f({"x": p[0], "y": p[1]}) for p in orbit.points]
    return all(abs(v - vals[0]) < tol * (1 + abs(vals[0])) for v in vals)


def shadowing_holds(F: RationalMapPlane, Q, M, p) -> bool:
    """P^-1(F(p)) = M(P^-1(p)) exactly."""
    vals = {"x": p[0], "y": p[1]}
    t = _normalize_exact(eval_exact(Q, vals) if not is_radical(Q) else gsubs(Q, vals))
    fp = F(*p)
    lhs = _normalize_exact(eval_exact(Q, {"x": fp[0], "y": fp[1]}))
    return lhs == M(t)


# ---------------------------------------------------------------------------
# CSV


_CTX = Context(prec=30)


def _decimal(v) -> str:
    if isinstance(v, Fraction):
        return str(_CTX.divide(Decimal(v.numerator), Decimal(v.denominator)))
    if isinstance(v, QuadNumber):
        p = _CTX.divide(Decimal(v.p.numerator), Decimal(v.p.denominator))
        q = _CTX.divide(Decimal(v.q.numerator), Decimal(v.q.denominator))
        root = _CTX.sqrt(Decimal(abs(v.d)))
        if v.d > 0:
            return str(_CTX.add(p, _CTX.multiply(q, root)))
        im = _CTX.multiply(q, root)
        sign = "+" if im >= 0 else "-"
        return f"{p}{sign}{abs(im)}i"
    return str(v)


def _float_str(v) -> str:
    if isinstance(v, complex):
        return f"{v.real:.17g}{v.imag:+.17g}j"
    return f"{v:.17g}"


def orbit_csv(orbit: Orbit) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if orbit.exact:
        w.writerow(["step", "x", "y", "x_exact", "y_exact"])
        for k, (x, y) in enumerate(orbit.points):
            w.writerow([k, _float_str(_as_float(x)), _float_str(_as_float(y)), _decimal(x), _decimal(y)])
    else:
        w.writerow(["step", "x", "y"])
        for k, (x, y) in enumerate(orbit.points):
            w.writerow([k, _float_str(x), _float_str(y)])
    return buf.getvalue()


def write_csv(orbit: Orbit, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(orbit_csv(orbit))
