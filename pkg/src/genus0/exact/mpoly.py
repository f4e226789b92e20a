"""Sparse multivariate polynomials and reduced rational functions.

An :class:`MPoly` is a dict ``{exponent tuple: coefficient}`` over a tuple of
generator names.  Generators are kept sorted by :func:`gen_key` (``x`` before
``y`` before ``t`` before the parameters), and the monomial order is lex in that
order.  Coefficients are exact scalars: ``Fraction`` or a numeric
:class:`~genus0.exact.scalars.QuadNumber`.

:class:`RatFunc` is a quotient of two coprime MPolys with a monic denominator,
which makes structural equality coincide with equality of functions.
"""

from __future__ import annotations

from fractions import Fraction
from .scalars import QuadNumber, MixedFieldError, fdiv, format_quad

__all__ = ["MPoly", "RatFunc", "gen_key", "poly_gcd_multi", "NotExactDivision"]

_PRIORITY = {"x": 0, "y": 1, "t": 2, "u": 3, "v": 4, "s": 5, "h": 6, "k": 7}


def gen_key(name: str):
    return (_PRIORITY.get(name, 10), name)


class NotExactDivision(ArithmeticError):
    pass


def _coerce_coeff(c):
    if isinstance(c, bool):
        return Fraction(int(c))
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, Fraction):
        return c
    if isinstance(c, QuadNumber) and c.numeric:
        return c
    if isinstance(c, (float, complex)):
        raise MixedFieldError("floats are not allowed as exact polynomial coefficients")
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


def _is_scalar(c) -> bool:
    return isinstance(c, (int, Fraction)) or (isinstance(c, QuadNumber) and c.numeric)


class MPoly:
    __slots__ = ("gens", "terms")
    is_function_field_element = True

    def __init__(self, gens, terms, _trusted=False):
        self.gens = tuple(gens)
        if _trusted:
            self.terms = terms
        else:
            self.terms = {tuple(e): _coerce_coeff(c) for e, c in terms.items() if c}

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls, gens=()):
        return cls(gens, {}, True)

    @classmethod
    def const(cls, c, gens=()):
        c = _coerce_coeff(c)
        if not c:
            return cls(gens, {}, True)
        return cls(gens, {(0,) * len(gens): c}, True)

    @classmethod
    def var(cls, name: str):
        return cls((name,), {(1,): Fraction(1)}, True)

    @classmethod
    def monomial(cls, gens, exps, coeff=1):
        return cls(gens, {tuple(exps): _coerce_coeff(coeff)})

    # -- generator handling -------------------------------------------
    def with_gens(self, gens):
        gens = tuple(gens)
        if gens == self.gens:
            return self
        idx = {g: i for i, g in enumerate(gens)}
        pos = []
        for g in self.gens:
            if g not in idx:
                # allow dropping generators that do not occur
                j = self.gens.index(g)
                if any(e[j] for e in self.terms):
                    raise ValueError(f"generator {g!r} missing from target")
                pos.append(None)
            else:
                pos.append(idx[g])
        n = len(gens)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for j, p in enumerate(pos):
                if p is not None:
                    ne[p] = e[j]
            out[tuple(ne)] = c
        return MPoly(gens, out, True)

    def used_gens(self):
        used = set()
        for i, g in enumerate(self.gens):
            for e in self.terms:
                if e[i]:
                    used.add(g)
                    break
        return used

    def stripped(self):
        used = self.used_gens()
        if len(used) == len(self.gens):
            return self
        return self.with_gens(sorted(used, key=gen_key))

    def _unify(self, other):
        if self.gens == other.gens:
            return self, other
        gens = tuple(sorted(set(self.gens) | set(other.gens), key=gen_key))
        return self.with_gens(gens), other.with_gens(gens)

    def _coerce(self, other):
        if isinstance(other, MPoly):
            return self._unify(other)
        if _is_scalar(other):
            return self, MPoly.const(other, self.gens)
        return None

    # -- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def __bool__(self):
        return bool(self.terms)

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return MPoly(a.gens, out, True)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.gens, {e: -c for e, c in self.terms.items()}, True)

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b + (-a)

    def scale(self, c):
        c = _coerce_coeff(c)
        if not c:
            return MPoly(self.gens, {}, True)
        return MPoly(self.gens, {e: v * c for e, v in self.terms.items()}, True)

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = self._unify(other)
        if len(a.terms) > len(b.terms):
            a, b = b, a
        out = {}
        bt = list(b.terms.items())
        for ea, ca in a.terms.items():
            for eb, cb in bt:
                e = tuple(x + y for x, y in zip(ea, eb))
                v = out.get(e)
                out[e] = ca * cb if v is None else v + ca * cb
        return MPoly(a.gens, {e: c for e, c in out.items() if c}, True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MPoly.const(1, self.gens)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if _is_scalar(other):
            if not other:
                raise ZeroDivisionError("division of a polynomial by zero")
            inv = fdiv(1, other)
            return self.scale(inv)
        if isinstance(other, MPoly):
            return RatFunc(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return RatFunc(MPoly.const(other), self)
        return NotImplemented

    # -- equality ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MPoly):
            a, b = self._unify(other)
            return a.terms == b.terms
        if _is_scalar(other):
            if not other:
                return not self.terms
            return bool(self.is_constant() and self.terms and self.constant_value() == other)
        return NotImplemented

    def __hash__(self):
        s = self.stripped()
        return hash((s.gens, frozenset(s.terms.items())))

    # -- structure -----------------------------------------------------
    def degree(self, var: str) -> int:
        """Degree in ``var``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var not in self.gens:
            return 0
        i = self.gens.index(var)
        return max(e[i] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def leading(self):
        """(exponent, coefficient) of the lex-leading term."""
        e = max(self.terms)
        return e, self.terms[e]

    def leading_coeff(self):
        return self.terms[max(self.terms)]

    def monic(self):
        if not self.terms:
            return self
        lc = self.leading_coeff()
        if lc == 1:
            return self
        return self.scale(fdiv(1, lc))

    def coeffs_in(self, var: str) -> dict:
        """Split by powers of ``var``; coefficients keep the same gens."""
        if var not in self.gens:
            return {0: self} if self.terms else {}
        i = self.gens.index(var)
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            ne = e[:i] + (0,) + e[i + 1 :]
            parts.setdefault(k, {})[ne] = c
        return {k: MPoly(self.gens, d, True) for k, d in parts.items()}

    def lead_in(self, var: str):
        cs = self.coeffs_in(var)
        return cs[max(cs)]

    def shift(self, var: str, k: int):
        """Multiply by var**k (var must be a generator)."""
        if k == 0:
            return self
        i = self.gens.index(var)
        return MPoly(
            self.gens,
            {e[:i] + (e[i] + k,) + e[i + 1 :]: c for e, c in self.terms.items()},
            True,
        )

    def diff(self, var: str):
        if var not in self.gens:
            return MPoly(self.gens, {}, True)
        i = self.gens.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1 :]] = c * e[i]
        return MPoly(self.gens, out, True)

    def min_exponents(self):
        it = iter(self.terms)
        m = list(next(it))
        for e in it:
            for j, v in enumerate(e):
                if v < m[j]:
                    m[j] = v
        return tuple(m)

    def divide_monomial(self, exps):
        if not any(exps):
            return self
        return MPoly(
            self.gens,
            {tuple(a - b for a, b in zip(e, exps)): c for e, c in self.terms.items()},
            True,
        )

    def coefficients(self):
        return list(self.terms.values())

    # -- evaluation ----------------------------------------------------
    def evaluate(self, values: dict):
        """Substitute ``values`` (generator -> ring element) and sum up.

        Generators without a value stay symbolic.  Values can be scalars,
        MPolys, RatFuncs, QuadNumbers or floats; the usual operator rules
        decide the result type.
        """
        vals = []
        for g in self.gens:
            if g in values:
                vals.append(values[g])
            else:
                vals.append(MPoly.var(g))
        cache: list[dict] = [dict() for _ in self.gens]

        def power(j, k):
            c = cache[j]
            r = c.get(k)
            if r is None:
                r = vals[j] if k == 1 else power(j, k - 1) * vals[j]
                c[k] = r
            return r

        total = 0
        for e, c in self.terms.items():
            term = c
            for j, k in enumerate(e):
                if k:
                    term = term * power(j, k)
            total = total + term
        return total

    def eval_float(self, values: dict) -> complex:
        from .scalars import downcast

        total = 0j
        vals = [values[g] for g in self.gens]
        for e, c in self.terms.items():
            term = downcast(c)
            for v, k in zip(vals, e):
                if k:
                    term *= v**k
            total += term
        return total

    # -- printing ------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def __str__(self):
        return format_mpoly(self)

    def __repr__(self):
        return f"MPoly({format_mpoly(self)!r}, gens={self.gens})"


# ---------------------------------------------------------------------------
# exact division, pseudo-remainder, gcd


def divexact(a: MPoly, b: MPoly) -> MPoly:
    """a / b, raising NotExactDivision when b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    a, b = a._unify(b)
    if b.is_constant():
        return a.scale(fdiv(1, b.constant_value()))
    eb, cb = b.leading()
    r = dict(a.terms)
    q = {}
    bt = list(b.terms.items())
    while r:
        er = max(r)
        if any(x < y for x, y in zip(er, eb)):
            raise NotExactDivision("remainder is nonzero")
        c = fdiv(r[er], cb)
        e = tuple(x - y for x, y in zip(er, eb))
        q[e] = c
        for ebt, cbt in bt:
            m = tuple(x + y for x, y in zip(e, ebt))
            v = r.get(m)
            nv = -c * cbt if v is None else v - c * cbt
            if nv:
                r[m] = nv
            else:
                r.pop(m, None)
    return MPoly(a.gens, q, True)


def try_divexact(a: MPoly, b: MPoly):
    try:
        return divexact(a, b)
    except NotExactDivision:
        return None


def prem(f: MPoly, g: MPoly, var: str) -> MPoly:
    """Sparse pseudo-remainder of f by g with respect to ``var``."""
    f, g = f._unify(g)
    n = g.degree(var)
    if n < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    lc = g.lead_in(var)
    r = f
    dr = r.degree(var)
    while r and dr >= n:
        lr = r.lead_in(var)
        r = r * lc - (g * lr).shift(var, dr - n)
        dr = r.degree(var)
    return r


def content_in(p: MPoly, var: str) -> MPoly:
    cs = list(p.coeffs_in(var).values())
    return poly_gcd_multi(cs)


def primitive_in(p: MPoly, var: str) -> MPoly:
    if p.is_zero():
        return p
    c = content_in(p, var)
    if c.is_constant():
        return p.monic() if p.leading_coeff() != 1 else p
    return divexact(p, c)


def poly_gcd_multi(polys) -> MPoly:
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return MPoly.zero()
    polys.sort(key=lambda p: (len(p.terms), p.total_degree()))
    g = polys[0]
    for p in polys[1:]:
        if g.is_constant():
            break
        g = mgcd(g, p)
    if g.is_constant():
        return MPoly.const(1, g.gens)
    return g.monic()


def _univariate_gcd(a: MPoly, b: MPoly, i: int) -> MPoly:
    from .poly import Poly, poly_gcd

    def dense(p):
        n = max(e[i] for e in p.terms)
        coeffs = [Fraction(0)] * (n + 1)
        for e, c in p.terms.items():
            coeffs[e[i]] = c
        return Poly(coeffs)

    g = poly_gcd(dense(a), dense(b))
    n = len(a.gens)
    out = {}
    for k, c in enumerate(g.coeffs):
        if c:
            e = [0] * n
            e[i] = k
            out[tuple(e)] = c
    return MPoly(a.gens, out, True)


def mgcd(a: MPoly, b: MPoly) -> MPoly:
    """Monic gcd of two multivariate polynomials over Q or Q(sqrt d).

    Rational inputs go through sympy's sparse polynomial rings (heuristic
    gcd over Z), which avoids the coefficient growth of a plain Euclidean
    remainder sequence; quadratic-field inputs use the recursive PRS below.
    """
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    a, b = a._unify(b)
    one = MPoly.const(1, a.gens)
    if a.is_constant() or b.is_constant():
        return one
    if _all_rational(a) and _all_rational(b):
        return _sympy_gcd(a, b)
    return _gcd_rec(a, b).monic()


def _all_rational(p: MPoly) -> bool:
    return all(type(c) is Fraction for c in p.terms.values())


_RINGS: dict = {}


def _sympy_ring(gens):
    R = _RINGS.get(gens)
    if R is None:
        from sympy import QQ
        from sympy.polys.rings import ring

        R = ring(",".join(gens), QQ)[0]
        _RINGS[gens] = R
    return R


def _sympy_gcd(a: MPoly, b: MPoly) -> MPoly:
    from sympy import QQ

    R = _sympy_ring(a.gens)
    fa = R.from_dict({e: QQ(c.numerator, c.denominator) for e, c in a.terms.items()})
    fb = R.from_dict({e: QQ(c.numerator, c.denominator) for e, c in b.terms.items()})
    g = fa.gcd(fb)
    out = {tuple(e): Fraction(int(c.numerator), int(c.denominator)) for e, c in g.items()}
    return MPoly(a.gens, out, True).monic()


def _gcd_rec(a: MPoly, b: MPoly) -> MPoly:
    gens = a.gens
    n = len(gens)
    ma, mb = a.min_exponents(), b.min_exponents()
    mon = tuple(min(x, y) for x, y in zip(ma, mb))
    a = a.divide_monomial(ma)
    b = b.divide_monomial(mb)
    mono = MPoly(gens, {mon: Fraction(1)}, True)
    if a.is_constant() or b.is_constant():
        return mono
    if len(a.terms) == 1 or len(b.terms) == 1:
        # a monomial with its monomial content removed is a constant
        return mono
    ua = [i for i in range(n) if any(e[i] for e in a.terms)]
    ub = [i for i in range(n) if any(e[i] for e in b.terms)]
    sa, sb = set(ua), set(ub)
    only_a = sa - sb
    only_b = sb - sa
    if only_a or only_b:
        if only_a:
            var = gens[min(only_a)]
            parts = list(a.coeffs_in(var).values()) + [b]
        else:
            var = gens[min(only_b)]
            parts = list(b.coeffs_in(var).values()) + [a]
        g = poly_gcd_multi(parts).with_gens(gens)
        return mono * g
    if len(sa) == 1:
        return mono * _univariate_gcd(a, b, ua[0])
    # quick divisibility checks
    if len(a.terms) <= len(b.terms):
        if try_divexact(b, a) is not None:
            return mono * a
    elif try_divexact(a, b) is not None:
        return mono * b
    var = min(
        (gens[i] for i in sa),
        key=lambda g: (max(a.degree(g), b.degree(g)), gen_key(g)),
    )
    ca, cb = content_in(a, var), content_in(b, var)
    pa = a if ca.is_constant() else divexact(a, ca)
    pb = b if cb.is_constant() else divexact(b, cb)
    c = mgcd(ca, cb)
    if pa.degree(var) < pb.degree(var):
        pa, pb = pb, pa
    while True:
        r = prem(pa, pb, var)
        if r.is_zero():
            break
        if r.degree(var) == 0:
            return mono * c
        r = primitive_in(r, var)
        pa, pb = pb, r
    g = primitive_in(pb, var)
    return mono * c * g


# ---------------------------------------------------------------------------
# rational functions


class RatFunc:
    """Reduced quotient ``num/den`` with monic ``den``.

    Arithmetic accepts scalars and MPolys; it also combines with numeric
    QuadNumber constants.  A symbolic radical (a QuadNumber whose base field is
    RatFunc) takes precedence, so those operations are delegated to it.
    """

    __slots__ = ("num", "den")
    is_function_field_element = True

    def __init__(self, num, den=None, _reduced=False):
        if not isinstance(num, MPoly):
            num = MPoly.const(num)
        if den is None:
            den = MPoly.const(1, num.gens)
        elif not isinstance(den, MPoly):
            den = MPoly.const(den, num.gens)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @classmethod
    def var(cls, name):
        return cls(MPoly.var(name), None, True)

    @classmethod
    def const(cls, c):
        return cls(MPoly.const(c), MPoly.const(1), True)

    @property
    def gens(self):
        a, b = self.num._unify(self.den)
        return a.gens

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MPoly):
            return RatFunc(other, None, True)
        if _is_scalar(other):
            return RatFunc(MPoly.const(other), MPoly.const(1), True)
        return None

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        return fdiv(self.num.constant_value(), self.den.constant_value())

    def is_polynomial(self):
        return self.den.is_constant()

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if self.den.is_constant() and o.den.is_constant():
            num = self.num * o.den.constant_value() + o.num * self.den.constant_value()
            return RatFunc(num, MPoly.const(1), False)
        g = mgcd(self.den, o.den)
        if g.is_constant():
            num = self.num * o.den + o.num * self.den
            den = self.den * o.den
            return RatFunc(*_normalize_den(num, den), True)
        d1 = divexact(self.den, g)
        d2 = divexact(o.den, g)
        num = self.num * d2 + o.num * d1
        den = d1 * d2 * g
        return RatFunc(num, den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if _is_scalar(other):
            if not other:
                return RatFunc(MPoly.zero(), MPoly.const(1), True)
            return RatFunc(self.num.scale(other), self.den, True)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return RatFunc(MPoly.zero(), MPoly.const(1), True)
        g1 = mgcd(self.num, o.den)
        g2 = mgcd(o.num, self.den)
        n1 = self.num if g1.is_constant() else divexact(self.num, g1)
        d2 = o.den if g1.is_constant() else divexact(o.den, g1)
        n2 = o.num if g2.is_constant() else divexact(o.num, g2)
        d1 = self.den if g2.is_constant() else divexact(self.den, g2)
        return RatFunc(*_normalize_den(n1 * n2, d1 * d2), True)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(*_normalize_den(self.den, self.num), True)

    def __truediv__(self, other):
        if _is_scalar(other):
            if not other:
                raise ZeroDivisionError("division by zero")
            return RatFunc(self.num.scale(fdiv(1, other)), self.den, True)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num**n, self.den**n, True)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, QuadNumber):
                return False
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((hash(self.num), hash(self.den)))

    # -- calculus and substitution -------------------------------------
    def diff(self, var: str):
        n, d = self.num._unify(self.den)
        num = n.diff(var) * d - n * d.diff(var)
        return RatFunc(num, d * d)

    def degree(self, var: str) -> int:
        return max(self.num.degree(var), self.den.degree(var))

    def used_gens(self):
        return self.num.used_gens() | self.den.used_gens()

    def subs(self, values: dict):
        """Substitute generators by values.

        RatFunc/MPoly/scalar values go through a single common-denominator
        composition; anything else (radicals, floats) is evaluated generically.
        """
        used = self.used_gens()
        values = {k: v for k, v in values.items() if k in used}
        if not values:
            return self
        if all(isinstance(v, (RatFunc, MPoly)) or _is_scalar(v) for v in values.values()):
            return compose(self, values)
        num = self.num.evaluate(values)
        den = self.den.evaluate(values)
        if not den:
            raise ZeroDivisionError("denominator vanishes at substituted values")
        if isinstance(num, (int, Fraction)) and isinstance(den, (int, Fraction)):
            return fdiv(num, den)
        return num / den

    def eval_float(self, values: dict) -> complex:
        d = self.den.eval_float(values)
        return self.num.eval_float(values) / d

    def downcast(self):
        if not self.is_constant():
            raise TypeError("cannot downcast a non-constant rational function")
        from .scalars import downcast

        return downcast(self.constant_value())

    def __str__(self):
        return format_ratfunc(self)

    def __repr__(self):
        return f"RatFunc({format_ratfunc(self)!r})"


def _normalize_den(num: MPoly, den: MPoly):
    lc = den.leading_coeff()
    if lc != 1:
        inv = fdiv(1, lc)
        num = num.scale(inv)
        den = den.scale(inv)
    return num.stripped(), den.stripped()


def _reduce(num: MPoly, den: MPoly):
    if num.is_zero():
        return MPoly.zero(), MPoly.const(1)
    if not den.is_constant():
        g = mgcd(num, den)
        if not g.is_constant():
            num = divexact(num, g)
            den = divexact(den, g)
    return _normalize_den(num, den)


def compose(f: RatFunc, values: dict) -> RatFunc:
    """Substitute rational-function values with one reduction at the end."""
    num, den = f.num._unify(f.den)
    gens = num.gens
    subs_idx = [i for i, g in enumerate(gens) if g in values]
    vals = {}
    for i in subs_idx:
        v = values[gens[i]]
        if isinstance(v, MPoly):
            v = RatFunc(v, None, True)
        elif _is_scalar(v):
            v = RatFunc(MPoly.const(v), MPoly.const(1), True)
        vals[i] = v
    maxdeg = {i: max(num.degree(gens[i]), den.degree(gens[i]), 0) for i in subs_idx}
    caches = {i: ({}, {}) for i in subs_idx}

    def pw(i, k, which):
        cache = caches[i][which]
        r = cache.get(k)
        if r is None:
            base = vals[i].num if which == 0 else vals[i].den
            if k == 0:
                r = MPoly.const(1)
            elif k == 1:
                r = base
            else:
                r = pw(i, k - 1, which) * base
            cache[k] = r
        return r

    keep = [i for i in range(len(gens)) if i not in vals]
    keep_gens = tuple(gens[i] for i in keep)

    def image(p: MPoly) -> MPoly:
        total = MPoly.zero()
        groups: dict = {}
        for e, c in p.terms.items():
            key = tuple(e[i] for i in subs_idx)
            rest = tuple(e[i] for i in keep)
            groups.setdefault(key, {})[rest] = c
        for key, rest_terms in groups.items():
            term = MPoly(keep_gens, rest_terms, True)
            for i, k in zip(subs_idx, key):
                term = term * pw(i, k, 0) * pw(i, maxdeg[i] - k, 1)
            total = total + term
        return total

    # both images carry the same factor prod(den_i^maxdeg_i) which cancels
    return RatFunc(image(num), image(den))


# ---------------------------------------------------------------------------
# printing


def _format_coeff(c) -> str:
    if isinstance(c, QuadNumber):
        return "(" + format_quad(c.p, c.q, c.d) + ")"
    return str(c)


def _format_monomial(gens, e) -> str:
    parts = []
    for g, k in zip(gens, e):
        if k == 1:
            parts.append(g)
        elif k > 1:
            parts.append(f"{g}^{k}")
    return "*".join(parts)


def format_mpoly(p: MPoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for e, c in p.sorted_terms():
        mono = _format_monomial(p.gens, e)
        neg = False
        if isinstance(c, Fraction) and c < 0:
            neg, c = True, -c
        if not mono:
            body = _format_coeff(c)
        elif c == 1:
            body = mono
        else:
            body = _format_coeff(c) + "*" + mono
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _needs_parens(p: MPoly) -> bool:
    if len(p.terms) > 1:
        return True
    (e, c), = p.terms.items()
    if isinstance(c, Fraction):
        return c.denominator != 1 and any(e)
    return False


def format_ratfunc(f: RatFunc) -> str:
    n = format_mpoly(f.num)
    if f.den.is_constant():
        return n
    d = format_mpoly(f.den)
    if len(f.num.terms) > 1 or (f.num.terms and isinstance(f.num.leading_coeff(), QuadNumber)):
        n = f"({n})"
    elif f.num.terms and _needs_parens(f.num):
        n = f"({n})"
    if len(f.den.terms) > 1 or _needs_parens(f.den) or "*" in d:
        d = f"({d})"
    return f"{n}/{d}"
