"""Dense univariate polynomials over an exact field.

Coefficients are stored low-to-high degree.  Any field element works as a
coefficient (rationals, quadratic-extension numbers, or rational functions
when the polynomial lives over a function field), which is what the
Euclidean algorithm in ``K(C)[t]`` needs.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import fdiv

__all__ = ["Poly", "poly_gcd", "poly_divmod", "DEG_ZERO"]

# degree of the zero polynomial
DEG_ZERO = -1


def _strip(coeffs):
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return list(coeffs[:n])


class Poly:
    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs, var: str = "t"):
        self.coeffs = _strip(coeffs)
        self.var = var

    @classmethod
    def from_roots(cls, roots, var="t"):
        p = cls([Fraction(1)], var)
        for r in roots:
            p = p * cls([-r, Fraction(1)], var)
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def lc(self):
        return self.coeffs[-1]

    def _other(self, other):
        if isinstance(other, Poly):
            if other.var != self.var and other.degree > 0 and self.degree > 0:
                raise ValueError(f"variables differ: {self.var} vs {other.var}")
            return other
        return Poly([other], self.var)

    def __add__(self, other):
        o = self._other(other)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if not self.coeffs or not o.coeffs:
            return Poly([], self.var)
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly([Fraction(1)], self.var)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other], self.var)
        return len(self.coeffs) == len(other.coeffs) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.var, tuple(self.coeffs)))

    def monic(self):
        if not self.coeffs:
            return self
        lc = self.lc()
        if lc == 1:
            return self
        return Poly([fdiv(c, lc) for c in self.coeffs], self.var)

    def derivative(self):
        return Poly([c * i for i, c in enumerate(self.coeffs)][1:], self.var)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"Poly({self.coeffs!r}, var={self.var!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if mono and c == 1:
                parts.append(mono)
            elif mono:
                parts.append(f"({c})*{mono}")
            else:
                parts.append(f"({c})")
        return " + ".join(parts)


def poly_divmod(a: Poly, b: Poly, is_zero=None):
    """Euclidean division over a field.

    ``is_zero`` lets the caller supply a zero test for coefficients that are
    only zero modulo some relation (e.g. functions on a curve).
    """
    if is_zero is None:
        is_zero = lambda c: not c  # noqa: E731
    bc = list(b.coeffs)
    while bc and is_zero(bc[-1]):
        bc.pop()
    if not bc:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a.coeffs)
    db = len(bc) - 1
    lcb = bc[-1]
    q = [0] * max(len(r) - db, 1)
    while True:
        while r and is_zero(r[-1]):
            r.pop()
        if len(r) - 1 < db:
            break
        k = len(r) - 1 - db
        c = fdiv(r[-1], lcb)
        q[k] = c
        for i, bi in enumerate(bc):
            r[i + k] = r[i + k] - c * bi
        r.pop()
    return Poly(q, a.var), Poly(r, a.var)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0."""
    a, b = p, q
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    return a.monic()
