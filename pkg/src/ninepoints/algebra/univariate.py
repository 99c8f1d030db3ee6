"""Roots of univariate polynomials inside Q or a single quadratic extension.

Coefficient lists run from the constant term upwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .poly import MPoly
from .quadext import QuadExt, squarefree_part


class NoSolvableRootError(ValueError):
    """Every irreducible factor has degree >= 3."""


@dataclass
class RootField:
    rational_roots: list[Fraction] = field(default_factory=list)
    # (d, [c0, c1, c2]) for each irreducible monic quadratic factor
    quadratic_factors: list[tuple[int, list[Fraction]]] = field(default_factory=list)
    higher_degrees: list[int] = field(default_factory=list)

    @property
    def extensions(self) -> list[int]:
        return sorted({d for d, _ in self.quadratic_factors})


def _trim(c: list) -> list:
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return c


def factor_rational(coeffs: Sequence[Fraction]) -> list[tuple[list[Fraction], int]]:
    """Irreducible monic factors over Q with multiplicities (sympy backend)."""
    c = _trim([Fraction(x) for x in coeffs])
    if len(c) <= 1:
        return []
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed([sympy.Rational(v.numerator, v.denominator) for v in c])), x, domain="QQ")
    _, facs = poly.factor_list()
    out = []
    for f, mult in facs:
        fc = [Fraction(int(r.p), int(r.q)) for r in reversed(f.all_coeffs())]
        lead = fc[-1]
        out.append(([v / lead for v in fc], mult))
    out.sort(key=lambda fm: (len(fm[0]), fm[0]))
    return out


def quadratic_roots(q: Sequence[Fraction]) -> tuple[int, list[QuadExt]]:
    c0, c1, c2 = (Fraction(v) for v in q)
    disc = c1 * c1 - 4 * c0 * c2
    num, den = disc.numerator, disc.denominator
    d = squarefree_part(num * den)
    # sqrt(disc) = sqrt(num*den)/den = k*sqrt(d)/den with num*den = d*k^2
    k = _isqrt_exact((num * den) // d)
    s = Fraction(k, den)
    roots = [QuadExt(-c1 / (2 * c2), sg * s / (2 * c2), d) for sg in (1, -1)]
    return d, roots


def _isqrt_exact(n: int) -> int:
    import math

    r = math.isqrt(n)
    if r * r != n:
        raise ArithmeticError("not a perfect square")
    return r


def univariate_root_field(p: MPoly | Sequence[Fraction]) -> RootField:
    """Rational roots and the quadratic extensions carrying the other roots."""
    if isinstance(p, MPoly):
        used = p.variables()
        if len(used) > 1:
            raise ValueError("polynomial is not univariate")
        coeffs = p.as_univariate(used[0]) if used else [p.constant_coeff()]
    else:
        coeffs = list(p)
    coeffs = _trim([Fraction(c) for c in coeffs])
    if not coeffs:
        raise ValueError("zero polynomial")
    out = RootField()
    for fac, _ in factor_rational(coeffs):
        deg = len(fac) - 1
        if deg == 1:
            out.rational_roots.append(-fac[0])
        elif deg == 2:
            d, _ = quadratic_roots(fac)
            out.quadratic_factors.append((d, fac))
        else:
            out.higher_degrees.append(deg)
    out.rational_roots.sort()
    if len(coeffs) > 1 and not out.rational_roots and not out.quadratic_factors:
        raise NoSolvableRootError(f"irreducible factors of degrees {out.higher_degrees}")
    return out


def evaluate(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def roots_in_field(coeffs: Sequence, d: int | None = None, allow_extension: bool = True):
    """Distinct roots lying in Q (or Q[sqrt d] when ``d`` is given).

    With rational coefficients and ``d is None`` and ``allow_extension``, roots of
    quadratic factors are returned in their own fields.
    """
    coeffs = _trim(list(coeffs))
    if len(coeffs) <= 1:
        return []
    quad = [c for c in coeffs if isinstance(c, QuadExt) and c.b != 0]
    if quad:
        d = quad[0].d
        conj = [c.conjugate() if isinstance(c, QuadExt) else c for c in coeffs]
        norm = _mul(coeffs, conj)
        norm = [c.a if isinstance(c, QuadExt) else Fraction(c) for c in norm]
        cands = _candidate_roots(norm, d)
        return _dedupe([r for r in cands if not evaluate(coeffs, r)])
    rat = [c.a if isinstance(c, QuadExt) else Fraction(c) for c in coeffs]
    roots = []
    for fac, _ in factor_rational(rat):
        if len(fac) == 2:
            roots.append(-fac[0])
        elif len(fac) == 3 and allow_extension:
            dd, rs = quadratic_roots(fac)
            if d is None or dd == d:
                roots.extend(rs)
    return roots


def _candidate_roots(norm: list[Fraction], d: int) -> list:
    out = []
    for fac, _ in factor_rational(norm):
        if len(fac) == 2:
            out.append(QuadExt(-fac[0], 0, d))
        elif len(fac) == 3:
            dd, rs = quadratic_roots(fac)
            if dd == d:
                out.extend(rs)
    return out


def _dedupe(xs):
    out = []
    for x in xs:
        if all(x != y for y in out):
            out.append(x)
    return out


def _mul(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def poly_gcd(a: Sequence, b: Sequence) -> list:
    """Monic gcd over the coefficient field."""
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_rem(a, b)
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def _poly_rem(a: list, b: list) -> list:
    a = list(a)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = a[shift + i] - f * c
        a = _trim(a)
    return a


def derivative(a: Sequence) -> list:
    return [c * i for i, c in enumerate(a)][1:]


def squarefree(a: Sequence) -> list:
    """``a / gcd(a, a')`` made monic."""
    a = _trim(list(a))
    g = poly_gcd(a, derivative(a))
    if len(g) <= 1:
        lead = a[-1]
        return [c / lead for c in a]
    q = _poly_div(a, g)
    lead = q[-1]
    return [c / lead for c in q]


def _poly_div(a: list, b: list) -> list:
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = f
        for i, c in enumerate(b):
            a[shift + i] = a[shift + i] - f * c
        a = _trim(a)
    return q
