"""Sparse multivariate polynomials with exact rational (or Q[sqrt d]) coefficients."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .quadext import QuadExt

Mono = tuple[int, ...]

PARAM_NAMES = tuple(f"t{i}" for i in range(9))
XYZ = ("x", "y", "z")


def _coef(c):
    if isinstance(c, QuadExt):
        return c.a if c.b == 0 else c
    return Fraction(c)


class MonomialOrder:
    """Total monomial orders on exponent tuples.

    ``kind`` is ``"degrevlex"``, ``"lex"`` or ``"block"``.  A block order
    compares the first ``split`` variables by degrevlex and breaks ties with
    degrevlex on the remaining ones, so it eliminates the first block.
    """

    def __init__(self, kind: str = "degrevlex", split: int = 0):
        if kind not in ("degrevlex", "lex", "block"):
            raise ValueError(kind)
        self.kind = kind
        self.split = split
        self._cache: dict[Mono, tuple] = {}

    def key(self, m: Mono):
        k = self._cache.get(m)
        if k is None:
            if self.kind == "lex":
                k = m
            elif self.kind == "degrevlex":
                k = (sum(m), tuple(-e for e in reversed(m)))
            else:
                a, b = m[: self.split], m[self.split:]
                k = (sum(a), tuple(-e for e in reversed(a)), sum(b), tuple(-e for e in reversed(b)))
            self._cache[m] = k
        return k

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.split) == (other.kind, other.split)

    def __hash__(self):
        return hash((self.kind, self.split))

    def __repr__(self):
        return f"MonomialOrder({self.kind!r}, {self.split})" if self.kind == "block" else f"MonomialOrder({self.kind!r})"


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


class MPoly:
    """Polynomial over a fixed tuple of generator names."""

    __slots__ = ("gens", "terms")

    def __init__(self, gens: Sequence[str], terms: Mapping[Mono, object] | None = None):
        self.gens = tuple(gens)
        self.terms: dict[Mono, object] = {}
        if terms:
            for m, c in terms.items():
                c = _coef(c)
                if c:
                    self.terms[tuple(m)] = c

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, gens: Sequence[str], c) -> "MPoly":
        return cls(gens, {(0,) * len(gens): c})

    @classmethod
    def var(cls, gens: Sequence[str], name: str) -> "MPoly":
        i = list(gens).index(name)
        m = [0] * len(gens)
        m[i] = 1
        return cls(gens, {tuple(m): 1})

    @classmethod
    def gens_of(cls, gens: Sequence[str]) -> list["MPoly"]:
        return [cls.var(gens, g) for g in gens]

    def _new(self, terms) -> "MPoly":
        p = MPoly.__new__(MPoly)
        p.gens = self.gens
        p.terms = terms
        return p

    def _lift(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.gens != self.gens:
                raise ValueError(f"generator mismatch {self.gens} vs {other.gens}")
            return other
        return MPoly.const(self.gens, other)

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        t = dict(self.terms)
        for m, c in o.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = _coef(v)
            else:
                t.pop(m, None)
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            c0 = _coef(other)
            if not c0:
                return self._new({})
            return self._new({m: c * c0 for m, c in self.terms.items()})
        o = self._lift(other)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = t.get(m, 0) + c1 * c2
        return self._new({m: _coef(c) for m, c in t.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, MPoly):
            if not c.is_constant():
                raise TypeError("use divide() for polynomial division")
            c = c.constant_coeff()
        return self * (1 / _coef(c) if not isinstance(c, QuadExt) else QuadExt(1, 0, c.d) / c)

    def __pow__(self, e: int):
        out = MPoly.const(self.gens, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.const(self.gens, other)
        return self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # inspection ---------------------------------------------------------
    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_coeff(self):
        return self.terms.get((0,) * len(self.gens), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree(self, name: str) -> int:
        i = self.gens.index(name)
        return max((m[i] for m in self.terms), default=-1)

    def variables(self) -> list[str]:
        used = [False] * len(self.gens)
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return [g for g, u in zip(self.gens, used) if u]

    def lm(self, order: MonomialOrder = DEGREVLEX) -> Mono:
        return max(self.terms, key=order.key)

    def lc(self, order: MonomialOrder = DEGREVLEX):
        return self.terms[self.lm(order)]

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX):
        return sorted(self.terms.items(), key=lambda mc: order.key(mc[0]), reverse=True)

    def is_rational(self) -> bool:
        return all(not isinstance(c, QuadExt) for c in self.terms.values())

    # transformations ----------------------------------------------------
    def monic(self, order: MonomialOrder = DEGREVLEX) -> "MPoly":
        if not self.terms:
            return self
        return self / self.lc(order)

    def primitive(self, order: MonomialOrder = DEGREVLEX) -> "MPoly":
        """Integer coefficients with gcd 1 and a positive leading coefficient."""
        if not self.terms or not self.is_rational():
            return self.monic(order) if self.terms else self
        den = reduce(math.lcm, (Fraction(c).denominator for c in self.terms.values()), 1)
        ints = {m: int(c * den) for m, c in self.terms.items()}
        g = reduce(math.gcd, ints.values(), 0)
        p = self._new({m: Fraction(v // g) for m, v in ints.items()})
        return -p if p.lc(order) < 0 else p

    def diff(self, name: str) -> "MPoly":
        i = self.gens.index(name)
        t = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                t[tuple(mm)] = c * m[i]
        return self._new(t)

    def subs(self, values: Mapping[str, object]) -> "MPoly":
        """Substitute constants or same-ring polynomials for named generators."""
        idx = {self.gens.index(k): v for k, v in values.items() if k in self.gens}
        out = MPoly(self.gens)
        cache: dict = {}
        for m, c in self.terms.items():
            rest = list(m)
            term = MPoly.const(self.gens, c)
            scalar = Fraction(1)
            for i, v in idx.items():
                e = m[i]
                rest[i] = 0
                if not e:
                    continue
                if isinstance(v, MPoly):
                    key = (i, e)
                    if key not in cache:
                        cache[key] = v ** e
                    term = term * cache[key]
                else:
                    scalar = scalar * v ** e
            mono = MPoly(self.gens, {tuple(rest): 1})
            out = out + term * mono * scalar
        return out

    def evaluate(self, values: Mapping[str, object] | Sequence):
        """Evaluate at a point; ``values`` maps names or is positional."""
        if not isinstance(values, Mapping):
            values = dict(zip(self.gens, values))
        vals = [values[g] if g in values else None for g in self.gens]
        total = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for v, e in zip(vals, m):
                if e:
                    if v is None:
                        raise KeyError("missing value for a generator in use")
                    term = term * v ** e
            total = total + term
        return total

    def change_ring(self, gens: Sequence[str]) -> "MPoly":
        """Re-express over another generator tuple containing all used ones."""
        gens = tuple(gens)
        pos = []
        for i, g in enumerate(self.gens):
            pos.append(gens.index(g) if g in gens else None)
        t = {}
        for m, c in self.terms.items():
            mm = [0] * len(gens)
            for i, e in enumerate(m):
                if e:
                    if pos[i] is None:
                        raise ValueError(f"generator {self.gens[i]} not in target ring")
                    mm[pos[i]] = e
            t[tuple(mm)] = c
        p = MPoly.__new__(MPoly)
        p.gens = gens
        p.terms = t
        return p

    def as_univariate(self, name: str) -> list:
        """Coefficient list (low to high) of a polynomial in one variable."""
        i = self.gens.index(name)
        out: list = [Fraction(0)] * (self.degree(name) + 1)
        for m, c in self.terms.items():
            if any(e for j, e in enumerate(m) if j != i):
                raise ValueError("not univariate")
            out[m[i]] = c
        return out

    # printing -----------------------------------------------------------
    def format(self, order: MonomialOrder = DEGREVLEX) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms(order):
            mono = "*".join(
                g if e == 1 else f"{g}^{e}" for g, e in zip(self.gens, m) if e
            )
            if isinstance(c, QuadExt):
                coeff, neg = f"({c})", False
            else:
                neg = c < 0
                coeff = str(abs(c))
            if mono:
                body = mono if coeff == "1" else f"{coeff}*{mono}"
            else:
                body = coeff
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __str__(self):
        return self.primitive().format()

    def __repr__(self):
        return f"MPoly({self.format()!r}, gens={self.gens})"


def parse_poly(text: str, gens: Sequence[str]) -> MPoly:
    """Parse ``"2*t0 - t1^2 + 1/2"``-style input (``^`` or ``**`` for powers)."""
    import ast

    names = {g: MPoly.var(gens, g) for g in gens}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if isinstance(a, MPoly):
                    return a / b
                return Fraction(a) / Fraction(b)
            if isinstance(node.op, ast.Pow):
                return a ** int(b)
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Constant):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            return names[node.id]
        raise ValueError(f"cannot parse {ast.dump(node)}")

    out = ev(ast.parse(text.replace("^", "**"), mode="eval"))
    return out if isinstance(out, MPoly) else MPoly.const(gens, out)


def ring(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(names)
