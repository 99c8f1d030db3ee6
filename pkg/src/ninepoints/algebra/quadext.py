"""Elements of Q[sqrt(d)] for square-free d != 1."""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational


def squarefree_part(n: int) -> int:
    """Signed square-free kernel: ``n = s * m**2`` with ``s`` square-free."""
    if n == 0:
        raise ValueError("0 has no square-free part")
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
        if n % p == 0:
            out *= p
            n //= p
        p += 1 if p == 2 else 2
    return sign * out * n


def rational_sqrt(q) -> Fraction | None:
    q = Fraction(q)
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


class QuadExt:
    """``a + b*sqrt(d)`` with rational ``a, b``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = -1):
        if d == 1 or d == 0 or squarefree_part(d) != d:
            raise ValueError(f"d={d} is not a square-free integer != 1")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    @classmethod
    def sqrt(cls, d: int) -> "QuadExt":
        return cls(0, 1, d)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(f"mixing sqrt({self.d}) and sqrt({other.d})")
            return other
        if isinstance(other, (int, Rational)):
            return QuadExt(other, 0, self.d)
        return NotImplemented

    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q[sqrt(d)]")
        return self * QuadExt(o.a / n, -o.b / n, self.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, e: int):
        if e < 0:
            return (1 / self) ** (-e)
        out = QuadExt(1, 0, self.d)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.a == other.a and self.b == other.b and (self.d == other.d or self.b == 0)
        if isinstance(other, (int, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def sqrt_in_field(self) -> "QuadExt | None":
        """A square root inside Q[sqrt(d)], if one exists."""
        p, q = self.a, self.b
        if q == 0:
            r = rational_sqrt(p)
            if r is not None:
                return QuadExt(r, 0, self.d)
            r = rational_sqrt(p / self.d)
            if r is not None:
                return QuadExt(0, r, self.d)
            return None
        nr = rational_sqrt(self.norm())
        if nr is None:
            return None
        for a2 in ((p + nr) / 2, (p - nr) / 2):
            a = rational_sqrt(a2)
            if a:
                return QuadExt(a, q / (2 * a), self.d)
        return None

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return format_field(self)


_QUAD_RE = re.compile(r"^([+-]?\d+(?:/\d+)?)([+-]\d+(?:/\d+)?)\*sqrt\((-?\d+)\)$")


def format_field(c) -> str:
    """``"p/q"`` for rationals, ``"p/q+r/s*sqrt(d)"`` for quadratic elements."""
    if isinstance(c, QuadExt):
        if c.b == 0:
            return str(c.a)
        sign = "+" if c.b > 0 else "-"
        return f"{c.a}{sign}{abs(c.b)}*sqrt({c.d})"
    return str(Fraction(c))


def parse_field(text: str):
    text = text.replace(" ", "")
    m = _QUAD_RE.match(text)
    if m is None:
        return Fraction(text)
    return QuadExt(Fraction(m.group(1)), Fraction(m.group(2)), int(m.group(3)))


class ZSqrt:
    """``a + b*sqrt(d)`` with integer ``a, b``: the fraction-free coefficient
    ring used inside Buchberger's algorithm over Q[sqrt(d)]."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: int, b: int, d: int):
        self.a, self.b, self.d = a, b, d

    def __add__(self, o):
        if isinstance(o, int):
            return ZSqrt(self.a + o, self.b, self.d)
        return ZSqrt(self.a + o.a, self.b + o.b, self.d)

    def __radd__(self, o: int):
        return ZSqrt(self.a + o, self.b, self.d)

    def __sub__(self, o):
        if isinstance(o, int):
            return ZSqrt(self.a - o, self.b, self.d)
        return ZSqrt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, o: int):
        return ZSqrt(o - self.a, -self.b, self.d)

    def __neg__(self):
        return ZSqrt(-self.a, -self.b, self.d)

    def __mul__(self, o):
        if isinstance(o, int):
            return ZSqrt(self.a * o, self.b * o, self.d)
        return ZSqrt(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, o):
        if isinstance(o, int):
            return self.b == 0 and self.a == o
        return self.a == o.a and self.b == o.b

    def content(self) -> int:
        return math.gcd(self.a, self.b)

    def exact_div(self, g: int) -> "ZSqrt":
        return ZSqrt(self.a // g, self.b // g, self.d)

    def to_field(self) -> QuadExt:
        return QuadExt(self.a, self.b, self.d)
