"""Buchberger's algorithm and the ideal operations built on it.

Internally polynomials are dicts ``monomial -> coefficient`` with coefficients
in Z (or Z[sqrt d]); reductions are fraction free and the integer content is
divided out, which keeps coefficient growth over Q in check.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .poly import DEGREVLEX, LEX, MonomialOrder, MPoly
from .quadext import QuadExt, ZSqrt


# -- integral representation ------------------------------------------------

def _to_integral(p: MPoly) -> dict:
    vals = list(p.terms.values())
    quad = next((c for c in vals if isinstance(c, QuadExt) and c.b != 0), None)
    if quad is None:
        den = reduce(math.lcm, (Fraction(c).denominator for c in vals), 1)
        return {m: int(Fraction(c) * den) for m, c in p.terms.items()}
    d = quad.d
    den = 1
    for c in vals:
        if isinstance(c, QuadExt):
            den = math.lcm(den, c.a.denominator, c.b.denominator)
        else:
            den = math.lcm(den, Fraction(c).denominator)
    out = {}
    for m, c in p.terms.items():
        if isinstance(c, QuadExt):
            out[m] = ZSqrt(int(c.a * den), int(c.b * den), d)
        else:
            out[m] = ZSqrt(int(Fraction(c) * den), 0, d)
    return out


def _from_integral(f: dict, gens: Sequence[str], key) -> MPoly:
    lm = max(f, key=key)
    lc = f[lm]
    if isinstance(lc, ZSqrt):
        inv = QuadExt(1, 0, lc.d) / lc.to_field()
        terms = {m: c.to_field() * inv for m, c in f.items()}
    else:
        terms = {m: Fraction(c, lc) for m, c in f.items()}
    return MPoly(gens, terms)


def _content(f: dict):
    g = 0
    for c in f.values():
        g = math.gcd(g, c if isinstance(c, int) else c.content())
        if g == 1:
            return 1
    return g


def _divide_content(f: dict, g: int) -> dict:
    if g in (0, 1):
        return f
    return {m: (c // g if isinstance(c, int) else c.exact_div(g)) for m, c in f.items()}


def _primitive(f: dict, key) -> dict:
    f = _divide_content(f, _content(f))
    lc = f[max(f, key=key)]
    if isinstance(lc, int) and lc < 0:
        f = {m: -c for m, c in f.items()}
    return f


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _multipliers(c, gc):
    """(alpha, beta) with alpha*c == beta*gc, as small as possible."""
    if isinstance(c, int) and isinstance(gc, int):
        g = math.gcd(c, gc)
        return gc // g, c // g
    return gc, c


def _reduce(f: dict, basis: list, key, full: bool) -> dict:
    """Fraction-free normal form of ``f`` modulo ``basis`` (list of (lm, lc, poly))."""
    f = dict(f)
    rem: dict = {}
    steps = 0
    while f:
        m = max(f, key=key)
        c = f[m]
        for gm, gc, g in basis:
            if _divides(gm, m):
                break
        else:
            if not full:
                break
            rem[m] = f.pop(m)
            continue
        q = tuple(y - x for x, y in zip(gm, m))
        alpha, beta = _multipliers(c, gc)
        if alpha != 1:
            f = {k: v * alpha for k, v in f.items()}
            rem = {k: v * alpha for k, v in rem.items()}
        for mg, cg in g.items():
            mm = tuple(x + y for x, y in zip(mg, q))
            v = f.get(mm, 0) - beta * cg
            if v:
                f[mm] = v
            else:
                f.pop(mm, None)
        f.pop(m, None)
        steps += 1
        if steps % 12 == 0 and (f or rem):
            g = _content({**f, **rem}) if rem else _content(f)
            if g > 1:
                f = _divide_content(f, g)
                rem = _divide_content(rem, g)
    rem.update(f)
    return rem


def _spoly(f: dict, fm, g: dict, gm) -> dict:
    lcm = _lcm(fm, gm)
    alpha, beta = _multipliers(f[fm], g[gm])
    qf = tuple(x - y for x, y in zip(lcm, fm))
    qg = tuple(x - y for x, y in zip(lcm, gm))
    out: dict = {}
    for m, c in f.items():
        mm = tuple(x + y for x, y in zip(m, qf))
        out[mm] = c * alpha
    for m, c in g.items():
        mm = tuple(x + y for x, y in zip(m, qg))
        v = out.get(mm, 0) - c * beta
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def buchberger(polys: Iterable[dict], order: MonomialOrder) -> list[dict]:
    """Reduced Groebner basis (primitive integral representatives)."""
    key = order.key
    P: list[dict] = []
    L: list[tuple] = []
    active: list[int] = []
    pairs: list[tuple] = []  # (sort_key, lcm, i, j)

    def unit_result(f):
        return [{(0,) * len(next(iter(f))): 1}]

    def update(h: int):
        nonlocal active, pairs
        lmh = L[h]
        C = [(g, _lcm(lmh, L[g])) for g in active]
        D = []
        while C:
            g1, l1 = C.pop(0)
            if _coprime(lmh, L[g1]) or not any(_divides(l2, l1) for _, l2 in itertools.chain(C, D)):
                D.append((g1, l1))
        E = [(g, l) for g, l in D if not _coprime(lmh, L[g])]
        kept = []
        for sk, l, i, j in pairs:
            if _divides(lmh, l) and _lcm(L[i], lmh) != l and _lcm(lmh, L[j]) != l:
                continue
            kept.append((sk, l, i, j))
        for g, l in E:
            kept.append(((sum(l), key(l), g, h), l, g, h))
        pairs = kept
        active = [g for g in active if not _divides(lmh, L[g])] + [h]

    for f in polys:
        if not f:
            continue
        f = _reduce(f, [(L[i], P[i][L[i]], P[i]) for i in active], key, full=False)
        if not f:
            continue
        f = _primitive(f, key)
        lm = max(f, key=key)
        if not any(lm):
            return unit_result(f)
        P.append(f)
        L.append(lm)
        update(len(P) - 1)

    while pairs:
        best = min(range(len(pairs)), key=lambda k: pairs[k][0])
        _, l, i, j = pairs.pop(best)
        s = _spoly(P[i], L[i], P[j], L[j])
        if not s:
            continue
        basis = [(L[a], P[a][L[a]], P[a]) for a in active]
        h = _reduce(s, basis, key, full=False)
        if not h:
            continue
        h = _primitive(h, key)
        lm = max(h, key=key)
        if not any(lm):
            return unit_result(h)
        P.append(h)
        L.append(lm)
        update(len(P) - 1)

    # minimal basis, then tail-reduce
    minimal = []
    for a in active:
        if not any(b != a and _divides(L[b], L[a]) and (L[b] != L[a] or b < a) for b in active):
            minimal.append(a)
    out = []
    for a in minimal:
        others = [(L[b], P[b][L[b]], P[b]) for b in minimal if b != a]
        lead = {L[a]: P[a][L[a]]}
        tail = {m: c for m, c in P[a].items() if m != L[a]}
        # reduce the tail while keeping the leading term consistent
        red = _reduce({**lead, **tail}, others, key, full=True)
        out.append(_primitive(red, key))
    out.sort(key=lambda f: key(max(f, key=key)))
    return out


def groebner(polys: Sequence[MPoly], order: MonomialOrder = DEGREVLEX) -> list[MPoly]:
    """Reduced Groebner basis with monic elements, sorted by increasing leading monomial."""
    polys = [p for p in polys if p]
    if not polys:
        return []
    gens = polys[0].gens
    raw = buchberger([_to_integral(p) for p in polys], order)
    return [_from_integral(f, gens, order.key) for f in raw]


def normal_form(p: MPoly, basis: Sequence[MPoly], order: MonomialOrder = DEGREVLEX) -> MPoly:
    """Remainder of ``p`` modulo ``basis`` (over the coefficient field)."""
    if not p:
        return p
    key = order.key
    q = p
    rem = MPoly(p.gens)
    lead = [(b.lm(order), b.lc(order), b) for b in basis if b]
    while q:
        m = q.lm(order)
        c = q.terms[m]
        for gm, gc, g in lead:
            if _divides(gm, m):
                mono = MPoly(p.gens, {tuple(y - x for x, y in zip(gm, m)): 1})
                q = q - g * mono * (c / gc)
                break
        else:
            rem = rem + MPoly(p.gens, {m: c})
            q = q - MPoly(p.gens, {m: c})
    return rem


def spoly(f: MPoly, g: MPoly, order: MonomialOrder = DEGREVLEX) -> MPoly:
    fm, gm = f.lm(order), g.lm(order)
    lcm = _lcm(fm, gm)
    a = MPoly(f.gens, {tuple(x - y for x, y in zip(lcm, fm)): 1}) / f.lc(order)
    b = MPoly(f.gens, {tuple(x - y for x, y in zip(lcm, gm)): 1}) / g.lc(order)
    return a * f - b * g


class Ideal:
    """Ideal of a polynomial ring given by generators; Groebner bases are cached per order."""

    def __init__(self, gens: Sequence[MPoly], ring: Sequence[str] | None = None):
        gens = list(gens)
        if ring is None:
            if not gens:
                raise ValueError("empty ideal needs an explicit ring")
            ring = gens[0].gens
        self.ring = tuple(ring)
        self.gens = [g for g in gens if g]
        for g in self.gens:
            if g.gens != self.ring:
                raise ValueError("generator in a different ring")
        self._gb: dict[MonomialOrder, list[MPoly]] = {}

    def groebner(self, order: MonomialOrder = DEGREVLEX) -> list[MPoly]:
        if order not in self._gb:
            self._gb[order] = groebner(self.gens, order)
        return self._gb[order]

    def is_unit(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self) -> bool:
        return not self.gens

    def normal_form(self, p: MPoly, order: MonomialOrder = DEGREVLEX) -> MPoly:
        return normal_form(p, self.groebner(order), order)

    def contains(self, p: MPoly) -> bool:
        return not self.normal_form(p)

    __contains__ = contains

    def in_radical(self, p: MPoly) -> bool:
        """Rabinowitsch test: ``p`` vanishes on the whole variety."""
        if self.contains(p):
            return True
        ring = ("_w",) + self.ring
        w = MPoly.var(ring, "_w")
        ext = [g.change_ring(ring) for g in self.gens] + [1 - w * p.change_ring(ring)]
        return Ideal(ext, ring).is_unit()

    def __add__(self, other: "Ideal | Sequence[MPoly]") -> "Ideal":
        more = other.gens if isinstance(other, Ideal) else list(other)
        return Ideal(self.gens + more, self.ring)

    def equals(self, other: "Ideal") -> bool:
        return [str(g) for g in self.groebner()] == [str(g) for g in other.groebner()]

    def eliminate(self, drop: Sequence[str]) -> "Ideal":
        """Elimination ideal, expressed in the same ring."""
        drop = [d for d in self.ring if d in set(drop)]
        if not drop or not self.gens:
            return self
        keep = [g for g in self.ring if g not in drop]
        ring = tuple(drop) + tuple(keep)
        order = MonomialOrder("block", len(drop))
        gb = groebner([g.change_ring(ring) for g in self.gens], order)
        kept = [g for g in gb if not any(g.degree(d) > 0 for d in drop)]
        return Ideal([g.change_ring(self.ring) for g in kept], self.ring)

    def saturate(self, f: MPoly) -> "Ideal":
        """``self : f^oo`` via an auxiliary variable and elimination."""
        if not f:
            raise ValueError("saturation by zero")
        if f.is_constant() or not self.gens or self.is_unit():
            return self
        ring = ("_w",) + self.ring
        w = MPoly.var(ring, "_w")
        ext = [g.change_ring(ring) for g in self.groebner()] + [1 - w * f.change_ring(ring)]
        order = MonomialOrder("block", 1)
        gb = groebner(ext, order)
        kept = [g.change_ring(self.ring) for g in gb if g.degree("_w") <= 0]
        out = Ideal(kept, self.ring)
        out._gb[DEGREVLEX] = groebner(kept, DEGREVLEX) if kept else []
        return out

    def saturate_all(self, polys: Iterable[MPoly]) -> "Ideal":
        out = self
        for f in polys:
            if out.is_unit():
                break
            out = out.saturate(f)
        return out

    def independent_set(self) -> list[str]:
        """A maximal-size set of variables independent modulo the ideal."""
        gb = self.groebner()
        if not gb:
            return list(self.ring)
        lms = [g.lm() for g in gb]
        n = len(self.ring)
        for size in range(n, -1, -1):
            for subset in itertools.combinations(range(n), size):
                sset = set(subset)
                if all(any(e and i not in sset for i, e in enumerate(m)) for m in lms):
                    return [self.ring[i] for i in subset]
        return []

    def dimension(self) -> int:
        if self.is_unit():
            return -1
        return len(self.independent_set())

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.gens]})"


def lex_basis(ideal: Ideal, variables: Sequence[str]) -> list[MPoly]:
    """Lex Groebner basis with the given variable priority (first is largest)."""
    ring = tuple(variables) + tuple(g for g in ideal.ring if g not in variables)
    gb = groebner([g.change_ring(ring) for g in ideal.gens], LEX)
    return [g.change_ring(ideal.ring) for g in gb]
