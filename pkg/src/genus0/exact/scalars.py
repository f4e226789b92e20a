"""Exact scalars: rationals, quadratic-extension elements, explicit float downcast.

Rationals are plain ``int``/``Fraction`` values.  An element of a quadratic
extension is a :class:`QuadNumber` ``p + q*sqrt(d)``.  Over the rationals ``d``
is a square-free integer (negative values give the exact complex fields used
for roots of unity).  The same class also works one level up, with ``p``, ``q``
and ``d`` rational functions, which is how a square root of a parameter
expression is carried symbolically.

Floats never enter exact arithmetic implicitly; :func:`downcast` is the only
way to obtain a ``complex`` from an exact value.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

__all__ = [
    "QuadNumber",
    "MixedFieldError",
    "NoExactSqrt",
    "quad",
    "is_exact",
    "downcast",
    "scalar_ops",
    "squarefree_decompose",
    "rational_sqrt",
    "exact_sqrt",
    "as_rational",
    "real_sign",
    "compare_modulus_to_one",
    "exact_abs_squared",
    "is_rational",
    "fdiv",
]


class MixedFieldError(ValueError):
    """Two different quadratic extensions (or exact and float values) were mixed."""


class NoExactSqrt(ArithmeticError):
    """The requested square root does not exist in any supported exact field."""


def _is_float(x) -> bool:
    return isinstance(x, (float, complex)) and not isinstance(x, bool)


def is_exact(x) -> bool:
    return not _is_float(x)


def fdiv(a, b):
    """Field division that never falls back to float for two ints."""
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def as_rational(x):
    """Coerce ints, Fractions and decimal strings to a Fraction (exact)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


class QuadNumber:
    """``p + q*sqrt(d)``; immutable.

    ``d`` is a square-free integer other than 0 and 1 for numeric fields, or a
    non-square rational function for symbolic radicals.  Results with ``q == 0``
    collapse to the base field element, so a QuadNumber always has ``q != 0``.
    """

    __slots__ = ("p", "q", "d")

    def __init__(self, p, q, d):
        if isinstance(d, int):
            p = p if isinstance(p, Fraction) else Fraction(p)
            q = q if isinstance(q, Fraction) else Fraction(q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadNumber is immutable")

    # -- structure -----------------------------------------------------
    @property
    def numeric(self) -> bool:
        return isinstance(self.d, int)

    def _lift(self, other):
        """Return (p, q) of ``other`` viewed in this field, or None if foreign."""
        if isinstance(other, QuadNumber):
            if other.d is self.d or other.d == self.d:
                return other.p, other.q
            raise MixedFieldError(
                f"cannot mix sqrt({self.d}) and sqrt({other.d}) without a composite field"
            )
        if _is_float(other):
            raise MixedFieldError("exact/float mixing requires an explicit downcast")
        if isinstance(other, (int, Fraction)):
            return other, 0
        if not self.numeric and getattr(other, "is_function_field_element", False):
            return other, 0
        return None

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return quad(self.p + lifted[0], self.q + lifted[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(-self.p, -self.q, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return quad(self.p - lifted[0], self.q - lifted[1], self.d)

    def __rsub__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return quad(lifted[0] - self.p, lifted[1] - self.q, self.d)

    def __mul__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        p2, q2 = lifted
        if not q2:
            return quad(self.p * p2, self.q * p2, self.d)
        return quad(self.p * p2 + self.q * q2 * self.d, self.p * q2 + self.q * p2, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadNumber":
        """The Galois conjugate ``p - q*sqrt(d)`` (complex conjugate when d < 0)."""
        return QuadNumber(self.p, -self.q, self.d)

    def norm(self):
        return self.p * self.p - self.d * self.q * self.q

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroDivisionError("QuadNumber with zero norm")
        return quad(self.p / n, -self.q / n, self.d)

    def __truediv__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        p2, q2 = lifted
        if not q2:
            if not p2:
                raise ZeroDivisionError("division by zero")
            return quad(self.p / p2, self.q / p2, self.d)
        return self * QuadNumber(p2, q2, self.d).inverse()

    def __rtruediv__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return self.inverse() * quad(lifted[0], lifted[1], self.d)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = 1, self
        while n:
            if n & 1:
                result = base * result
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison ----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadNumber):
            return self.d == other.d and self.p == other.p and self.q == other.q
        if _is_float(other):
            return False
        # q != 0 by construction, so never equal to a base-field element
        return False

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(("quad", self.p, self.q, self.d))

    def __bool__(self):
        return True

    def sign(self) -> int:
        """Exact sign of a real element (numeric d > 0 only)."""
        if not self.numeric or self.d < 0:
            raise ValueError("sign is defined only for real quadratic fields")
        sp = (self.p > 0) - (self.p < 0)
        sq = (self.q > 0) - (self.q < 0)
        if sp == sq or sp == 0:
            return sq
        # p and q*sqrt(d) have opposite signs; compare squares
        lhs = self.p * self.p
        rhs = self.q * self.q * self.d
        return sp if lhs > rhs else sq

    def __lt__(self, other):
        return real_sign(self - other) < 0

    def __gt__(self, other):
        return real_sign(self - other) > 0

    def abs_squared(self):
        """``|z|^2`` exactly for numeric fields (real or imaginary)."""
        if not self.numeric:
            raise ValueError("abs_squared needs a numeric field")
        if self.d < 0:
            return self.norm()
        return self * self

    def imag_sign(self) -> int:
        """Sign of the imaginary part under the embedding sqrt(d) = i*sqrt(|d|)."""
        if not self.numeric or self.d > 0:
            return 0
        return (self.q > 0) - (self.q < 0)

    def __complex__(self):
        return downcast(self)

    def __repr__(self):
        return f"QuadNumber({self.p!r}, {self.q!r}, {self.d!r})"

    def __str__(self):
        return format_quad(self.p, self.q, self.d)


def format_quad(p, q, d) -> str:
    if not isinstance(d, int):
        body = f"({q})*sqrt({d})"
        return f"({p}) + {body}" if p else body
    parts = []
    if p:
        parts.append(str(p))
    if q == 1:
        tail = f"sqrt({d})"
    elif q == -1:
        tail = f"-sqrt({d})"
    else:
        tail = f"{q}*sqrt({d})"
    if parts and not tail.startswith("-"):
        parts.append("+" + tail)
    else:
        parts.append(tail)
    return "".join(parts)


def quad(p, q, d):
    """Build ``p + q*sqrt(d)``, collapsing to ``p`` when ``q`` is zero."""
    if not q:
        return p
    if isinstance(d, int) and (d == 0 or d == 1):
        raise ValueError("d must be a non-square")
    return QuadNumber(p, q, d)


def downcast(x) -> complex:
    """Explicit exact -> complex float conversion."""
    if isinstance(x, complex):
        return x
    if isinstance(x, (int, Fraction, float)):
        return complex(float(x))
    if isinstance(x, QuadNumber):
        if not x.numeric:
            raise TypeError("cannot downcast a symbolic radical")
        root = cmath.sqrt(x.d) if x.d < 0 else complex(math.sqrt(x.d))
        return complex(float(x.p)) + complex(float(x.q)) * root
    to_c = getattr(x, "downcast", None)
    if to_c is not None:
        return to_c()
    raise TypeError(f"cannot downcast {type(x).__name__}")


def scalar_ops(lhs, rhs, op: str):
    """Checked binary arithmetic on Scalars.

    Exact/float mixing is refused; use :func:`downcast` on the exact side first.
    """
    if _is_float(lhs) != _is_float(rhs):
        raise MixedFieldError("exact/float mixing requires an explicit downcast")
    if op == "+":
        return lhs + rhs
    if op in ("-", "−"):
        return lhs - rhs
    if op in ("*", "×"):
        return lhs * rhs
    if op in ("/", "÷"):
        if not rhs:
            raise ZeroDivisionError("scalar division by zero")
        if isinstance(lhs, int) and isinstance(rhs, int):
            return Fraction(lhs, rhs)
        return lhs / rhs
    raise ValueError(f"unknown operation {op!r}")


_SMALL_PRIMES: list[int] = []


def _primes_upto(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, v in enumerate(sieve) if v]


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return (s, k) with n = s * k**2.

    Trial division runs to 10**5; a leftover cofactor is checked for being a
    perfect square and otherwise kept in ``s``.  ``s`` is then square-free for
    every input whose large prime factors appear to the first power, which
    covers all values that arise from small rational data.
    """
    global _SMALL_PRIMES
    if n == 0:
        raise ValueError("squarefree part of 0")
    if not _SMALL_PRIMES:
        _SMALL_PRIMES = _primes_upto(100_000)
    sign = -1 if n < 0 else 1
    m = abs(n)
    s, k = 1, 1
    for pr in _SMALL_PRIMES:
        if pr * pr > m:
            break
        if m % pr:
            continue
        e = 0
        while m % pr == 0:
            m //= pr
            e += 1
        k *= pr ** (e // 2)
        if e % 2:
            s *= pr
    if m > 1:
        r = math.isqrt(m)
        if r * r == m:
            k *= r
        else:
            s *= m
    return sign * s, k


def rational_sqrt(x):
    """Square root of a rational if it is a rational square, else None."""
    x = as_rational(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def exact_sqrt(x, extend: bool = True):
    """A square root of ``x`` in the smallest supported exact field.

    * rational squares give rationals;
    * other rationals give ``k*sqrt(s)`` in Q(sqrt(s)) when ``extend`` is set;
    * elements of Q(sqrt(d)) must be squares inside Q(sqrt(d)).

    Raises :class:`NoExactSqrt` otherwise.  The root returned for a rational
    is the principal one (nonnegative, or positive imaginary part).
    """
    if _is_float(x):
        raise MixedFieldError("exact_sqrt of a float")
    if isinstance(x, (int, Fraction)):
        x = as_rational(x)
        if x == 0:
            return Fraction(0)
        r = rational_sqrt(x)
        if r is not None:
            return r
        if not extend:
            raise NoExactSqrt(f"{x} is not a rational square")
        # sqrt(n/d) = sqrt(n*d)/d
        s, k = squarefree_decompose(x.numerator * x.denominator)
        return QuadNumber(Fraction(0), Fraction(k, x.denominator), s)
    if isinstance(x, QuadNumber) and x.numeric:
        return _sqrt_in_quadratic(x)
    raise NoExactSqrt(f"no exact square root available for {x!r}")


def _sqrt_in_quadratic(z: QuadNumber):
    """Solve w**2 = z inside Q(sqrt(d)); w = u + v*sqrt(d)."""
    p, q, d = as_rational(z.p), as_rational(z.q), z.d
    # u^2 + d v^2 = p, 2uv = q  =>  u^2 = (p +- sqrt(p^2 - d q^2)) / 2
    nrm = rational_sqrt(p * p - d * q * q)
    if nrm is not None:
        for cand in ((p + nrm) / 2, (p - nrm) / 2):
            u = rational_sqrt(cand)
            if u is not None and u != 0:
                v = q / (2 * u)
                w = quad(u, v, d)
                if w * w == z:
                    return w
    raise NoExactSqrt(f"{z} is not a square in Q(sqrt({d}))")


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def exact_abs_squared(x):
    if isinstance(x, (int, Fraction)):
        return as_rational(x) * x
    if isinstance(x, QuadNumber):
        return x.abs_squared()
    raise TypeError(f"no exact modulus for {type(x).__name__}")


def compare_modulus_to_one(x) -> int:
    """Exact sign of |x| - 1 for rationals and numeric quadratic elements."""
    if isinstance(x, (int, Fraction)):
        a = abs(as_rational(x))
        return (a > 1) - (a < 1)
    if isinstance(x, QuadNumber) and x.numeric:
        if x.d < 0:
            n = x.norm()
            return (n > 1) - (n < 1)
        # real, irrational: |x| < 1 iff -1 < x < 1 (equality impossible)
        if (x - 1).sign() < 0 and (x + 1).sign() > 0:
            return -1
        return 1
    raise TypeError(f"no exact modulus for {type(x).__name__}")


def real_sign(x) -> int:
    """Exact sign of a real rational or real quadratic element."""
    if isinstance(x, QuadNumber):
        return x.sign()
    return (x > 0) - (x < 0)
