"""Mobius transformations t -> (a t + b)/(c t + d): algebra, dynamics
classification, one-dimensional Lie symmetry and conjugator solving."""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import MPoly, Poly, QuadNumber, RatFunc, gsubs, is_radical
from .exact.scalars import (
    MixedFieldError,
    NoExactSqrt,
    compare_modulus_to_one,
    downcast,
    exact_sqrt,
    fdiv,
)

__all__ = [
    "INFINITY",
    "Mobius",
    "MobiusClass",
    "MobiusError",
    "classify",
    "lie_symmetry_1d",
    "conjugacy_invariant",
    "solve_conjugator",
    "mobius_compose",
    "mobius_inverse",
]

# relative tolerance for decisions on float data
FLOAT_TOL = 1e-12
ROOT_OF_UNITY_CAP = 200


class MobiusError(ValueError):
    pass


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "oo"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def _is_float(x) -> bool:
    return isinstance(x, (float, complex))


def _unwrap(x):
    if isinstance(x, MPoly):
        x = RatFunc(x, None, True)
    if isinstance(x, RatFunc) and x.is_constant():
        return x.constant_value()
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    return x


def _zero(x) -> bool:
    if _is_float(x):
        return x == 0
    return not x


def _div(a, b):
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return fdiv(a, b)
    return a / b


class Mobius:
    """Projective quadruple (a, b, c, d) with ad - bc != 0.

    The given representative is kept for display; equality and hashing are
    projective (see :meth:`normalized`).  Entries may be exact scalars,
    rational functions of parameters, or complex floats.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        a, b, c, d = (_unwrap(v) for v in (a, b, c, d))
        if _zero(a * d - b * c):
            raise MobiusError("degenerate Mobius map: ad - bc = 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Mobius is immutable")

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def from_ratfunc(cls, r, var: str = "t") -> "Mobius":
        """Read (a t + b)/(c t + d) off a reduced rational function.

        The representative is the reduced quotient itself; when the map is
        affine it is scaled so that d = 1.
        """
        if is_radical(r):
            raise MobiusError(f"expression still depends on sqrt({r.d})")
        if not isinstance(r, RatFunc):
            r = RatFunc(r) if isinstance(r, MPoly) else RatFunc.const(r)
        if r.num.degree(var) > 1 or r.den.degree(var) > 1:
            raise MobiusError(
                f"not a Mobius map in {var}: degrees {r.num.degree(var)}/{r.den.degree(var)}"
            )

        def split(p: MPoly):
            cs = p.coeffs_in(var)
            lin = cs.get(1, MPoly.zero()).stripped()
            const = cs.get(0, MPoly.zero()).stripped()
            return _unwrap(lin), _unwrap(const)

        a, b = split(r.num)
        c, d = split(r.den)
        if _zero(c):
            a, b, d = _div(a, d), _div(b, d), Fraction(1)
        return cls(a, b, c, d)

    # -- structure -------------------------------------------------------
    @property
    def entries(self):
        return self.a, self.b, self.c, self.d

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def is_exact(self) -> bool:
        return not any(_is_float(v) for v in self.entries)

    def is_numeric(self) -> bool:
        return not any(isinstance(v, RatFunc) or is_radical(v) for v in self.entries)

    def normalized(self) -> "Mobius":
        """Representative whose first nonzero entry in (a, b, c, d) is 1."""
        lead = next(v for v in self.entries if not _zero(v))
        a, b, c, d = (_div(v, lead) for v in self.entries)
        return Mobius(a, b, c, d)

    def is_identity(self) -> bool:
        a, b, c, d = self.entries
        if _is_float(a) or _is_float(d) or _is_float(b) or _is_float(c):
            s = max(abs(downcast(v)) for v in self.entries)
            return abs(b) <= FLOAT_TOL * s and abs(c) <= FLOAT_TOL * s and abs(a - d) <= FLOAT_TOL * s
        return _zero(b) and _zero(c) and _zero(a - d)

    # -- algebra ---------------------------------------------------------
    def compose(self, other: "Mobius") -> "Mobius":
        """self o other (matrix product self * other)."""
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return Mobius(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def __matmul__(self, other):
        return self.compose(other)

    def inverse(self) -> "Mobius":
        a, b, c, d = self.entries
        return Mobius(d, -b, -c, a)

    def __pow__(self, n: int) -> "Mobius":
        if n < 0:
            return self.inverse() ** (-n)
        out = Mobius.identity()
        base = self
        while n:
            if n & 1:
                out = out.compose(base)
            base = base.compose(base)
            n >>= 1
        return out

    def order(self, cap: int = ROOT_OF_UNITY_CAP):
        """Smallest p <= cap with self^p = identity, else None."""
        m = self
        for p in range(1, cap + 1):
            if m.is_identity():
                return p
            m = m.compose(self)
        return None

    def __call__(self, t):
        a, b, c, d = self.entries
        if t is INFINITY:
            return INFINITY if _zero(c) else _div(a, c)
        den = c * t + d
        if _zero(den):
            return INFINITY
        return _div(a * t + b, den)

    def subs(self, values: dict) -> "Mobius":
        return Mobius(*(gsubs(v, values) for v in self.entries))

    def to_ratfunc(self, var: str = "t") -> RatFunc:
        t = RatFunc.var(var)
        return (t * self.a + self.b) / (t * self.c + self.d)

    # -- equality --------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Mobius):
            return NotImplemented
        x, y = self.entries, other.entries
        # projective equality: all 2x2 minors vanish
        for i, j in itertools.combinations(range(4), 2):
            if not _zero(x[i] * y[j] - x[j] * y[i]):
                return False
        return True

    def __hash__(self):
        n = self.normalized()
        return hash(tuple(str(v) for v in n.entries))

    def __str__(self):
        from .exact.mpoly import format_ratfunc

        def wrap(v):
            s = str(v)
            return s if s.replace(".", "").replace("/", "").lstrip("-").isalnum() else f"({s})"

        try:
            return format_ratfunc(self.to_ratfunc())
        except (TypeError, MixedFieldError):
            a, b, c, d = (wrap(v) for v in self.entries)
            return f"({a}*t + {b})/({c}*t + {d})"

    def __repr__(self):
        return f"Mobius({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


def mobius_compose(m: Mobius, n: Mobius) -> Mobius:
    return m.compose(n)


def mobius_inverse(m: Mobius) -> Mobius:
    return m.inverse()


@dataclass(frozen=True)
class MobiusClass:
    """Dynamics of a non-identity Mobius map.

    ``kind`` is one of "hyperbolic", "parabolic", "rotation".  For
    hyperbolic maps t0 is the attractor and t1 the repeller.  ``xi`` is the
    multiplier at t0, so w = (t - t0)/(t - t1) is multiplied by xi at every
    step.  Parabolic maps carry ``kappa`` with 1/(M(t) - t0) = 1/(t - t0) + kappa
    (or the translation length when t0 is infinity).
    """

    kind: str
    delta: object
    xi: object
    t0: object
    t1: object
    theta: float | None = None
    theta_exact: Fraction | None = None
    order: int | None = None
    kappa: object = None
    exact: bool = True

    @property
    def attractor(self):
        return self.t0 if self.kind in ("hyperbolic", "parabolic") else None

    @property
    def repeller(self):
        return self.t1 if self.kind == "hyperbolic" else None

    @property
    def fixed_points(self):
        if self.kind == "parabolic":
            return (self.t0,)
        return (self.t0, self.t1)

    def w(self, t):
        """First-integral coordinate (t - t0)/(t - t1), as a complex float."""
        if self.kind == "parabolic":
            raise MobiusError("no two-point coordinate for a parabolic map")
        t = complex(downcast(t))
        if self.t1 is INFINITY:
            return t - complex(downcast(self.t0))
        if self.t0 is INFINITY:
            return 1 / (t - complex(downcast(self.t1)))
        return (t - complex(downcast(self.t0))) / (t - complex(downcast(self.t1)))


def _entries_for_classify(m: Mobius):
    vals = []
    for v in m.entries:
        if isinstance(v, RatFunc) or is_radical(v):
            raise MobiusError("classification needs numeric entries; substitute parameters first")
        vals.append(v)
    return vals


def _im_sign(s) -> int:
    """Sign of the imaginary part (0 for real values)."""
    if _is_float(s):
        im = complex(s).imag
        return (im > 0) - (im < 0)
    if isinstance(s, QuadNumber) and s.d < 0:
        return (s.q > 0) - (s.q < 0)
    return 0


def _re_sign(s) -> int:
    if _is_float(s):
        re = complex(s).real
        return (re > 0) - (re < 0)
    if isinstance(s, QuadNumber):
        if s.d < 0:
            return (s.p > 0) - (s.p < 0)
        return s.sign()
    return (s > 0) - (s < 0)


def _phase_fraction(xi) -> float:
    z = complex(downcast(xi))
    return (cmath.phase(z) / (2 * math.pi)) % 1.0


def _root_order(xi, cap: int = ROOT_OF_UNITY_CAP):
    """Exact multiplicative order of xi if it is a root of unity of order <= cap."""
    w = xi
    for p in range(1, cap + 1):
        if w == 1:
            return p
        w = w * xi
    return None


def _exact_theta(xi, order):
    """theta as an exact Fraction k/p from the float phase and the known order."""
    approx = _phase_fraction(xi)
    k = round(approx * order) % order
    return Fraction(k, order)


def _sqrt_delta(delta):
    try:
        return exact_sqrt(delta)
    except (NoExactSqrt, MixedFieldError):
        return None


def classify(m: Mobius) -> MobiusClass:
    """Fixed points, multiplier and dynamics class of a non-identity map."""
    if m.is_identity():
        raise MobiusError("the identity has no dynamics class")
    a, b, c, d = _entries_for_classify(m)
    exact = m.is_exact()
    delta = (d - a) * (d - a) + 4 * b * c
    T = a + d

    if exact and not delta:
        return _parabolic(a, b, c, d, delta, True)
    if not exact:
        scale = max(abs(complex(downcast(v))) for v in (a, b, c, d)) ** 2
        if abs(delta) <= FLOAT_TOL * scale:
            return _parabolic(a, b, c, d, delta, False)

    s = _sqrt_delta(delta) if exact else None
    if s is not None:
        try:
            T + s
        except MixedFieldError:
            s = None
    if s is None:
        # sqrt(delta) outside the field: continue in complex floats
        exact = False
        a, b, c, d = (complex(downcast(v)) for v in (a, b, c, d))
        T = a + d
        delta_f = complex(downcast(delta))
        s = cmath.sqrt(delta_f)

    def xi_of(s):
        return _div(T + s, T - s)

    xi = xi_of(s)
    if exact:
        cmp = compare_modulus_to_one(xi)
    else:
        r = abs(xi)
        cmp = 0 if abs(r - 1) <= 1e-12 else (1 if r > 1 else -1)

    if cmp != 0:
        if cmp > 0:
            s = -s
            xi = xi_of(s)
        kind = "hyperbolic"
    else:
        kind = "rotation"
        # branch of sqrt(delta): Re s > 0, or Re s = 0 and Im s < 0
        re = _re_sign(s)
        if re < 0 or (re == 0 and _im_sign(s) > 0):
            s = -s
            xi = xi_of(s)

    t0, t1 = _fixed_points(a, b, c, d, s)
    theta = theta_exact = order = None
    if kind == "rotation":
        theta = _phase_fraction(xi)
        if exact:
            order = _root_order(xi)
            if order is not None:
                theta_exact = _exact_theta(xi, order)
                theta = float(theta_exact)
    return MobiusClass(kind, delta, xi, t0, t1, theta, theta_exact, order, None, exact)


def _fixed_points(a, b, c, d, s):
    """(t0, t1) where t0 carries the multiplier (T + s)/(T - s)."""
    if not _zero(c):
        t0 = _div((a - d) - s, 2 * c)
        t1 = _div((a - d) + s, 2 * c)
        return t0, t1
    # affine map: the finite fixed point has multiplier a/d, infinity d/a;
    # with c = 0, s = +-(d - a) and (T + s)/(T - s) is d/a when s = d - a
    finite = _div(b, d - a)
    if _zero(s - (d - a)):
        return INFINITY, finite
    return finite, INFINITY


def _parabolic(a, b, c, d, delta, exact) -> MobiusClass:
    if _zero(c):
        # translation t -> t + b/d
        return MobiusClass("parabolic", delta, Fraction(1) if exact else 1.0,
                           INFINITY, INFINITY, kappa=_div(b, d), exact=exact)
    t0 = _div(a - d, 2 * c)
    kappa = _div(2 * c, a + d)
    return MobiusClass("parabolic", delta, Fraction(1) if exact else 1.0,
                       t0, t0, kappa=kappa, exact=exact)


def lie_symmetry_1d(m: Mobius) -> Poly:
    """Y(t) = -b + (d - a) t + c t^2, which satisfies Y(M(t)) = M'(t) Y(t)."""
    a, b, c, d = m.entries
    return Poly([-b, d - a, c], "t")


def conjugacy_invariant(m: Mobius):
    """(a + d)^2 / (ad - bc); unchanged by scaling and by conjugation."""
    return _div(m.trace() * m.trace(), m.det())


def _nullspace(rows, ncols):
    """Basis of the right nullspace of a small matrix over an exact field."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if not _zero(rows[i][col])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col]
        rows[r] = [_div(v, inv) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not _zero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [vi - f * vr for vi, vr in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for fj in free:
        v = [Fraction(0)] * ncols
        v[fj] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fj]
        basis.append(v)
    return basis


def _scale_factor(m: Mobius, n: Mobius):
    trm, trn = m.trace(), n.trace()
    if not _zero(trn):
        return _div(trm, trn)
    if not _zero(trm):
        return None
    ratio = _div(m.det(), n.det())
    if isinstance(ratio, RatFunc):
        return None
    return _sqrt_delta(ratio)


def solve_conjugator(m: Mobius, n: Mobius):
    """A Mobius g with m = g^-1 o n o g, or None when m and n are not conjugate.

    Solves the linear system G M = lam N G for G, with lam fixed by the
    traces, and picks an invertible member of the solution space.
    """
    if m.is_identity() or n.is_identity():
        raise MobiusError("conjugator solving needs non-identity maps")
    if conjugacy_invariant(m) != conjugacy_invariant(n):
        return None
    lam = _scale_factor(m, n)
    if lam is None:
        return None
    a, b, c, d = m.entries
    A, B, C, D = n.entries
    rows = [
        [a - lam * A, c, -lam * B, 0],
        [b, d - lam * A, 0, -lam * B],
        [-lam * C, 0, a - lam * D, c],
        [0, -lam * C, b, d - lam * D],
    ]
    basis = _nullspace(rows, 4)
    if not basis:
        return None
    candidates = list(basis)
    if len(basis) >= 2:
        for k in range(1, 6):
            candidates.append([u + k * v for u, v in zip(basis[0], basis[1])])
            candidates.append([u - k * v for u, v in zip(basis[0], basis[1])])
    for g in candidates:
        if _zero(g[0] * g[3] - g[1] * g[2]):
            continue
        G = Mobius(*g)
        if G.compose(m) == n.compose(G):
            return G
    return None
