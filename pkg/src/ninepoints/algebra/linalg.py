"""Exact determinants, minors, ranks and kernels."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from .poly import MPoly
from .quadext import QuadExt


def det3(m: Sequence[Sequence]):
    """Cofactor expansion of a 3x3 determinant (entries: numbers or MPoly)."""
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def det(m: Sequence[Sequence]):
    """Laplace expansion along the first row; meant for small matrices."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return det3(m)
    total = None
    for j in range(n):
        if _is_zero(m[0][j]):
            continue
        sub = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * det(sub)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return m[0][0] * 0
    return total


def _is_zero(x) -> bool:
    return not x


def minors(m: Sequence[Sequence], r: int) -> list:
    """All nonzero r x r minors, without duplicates, in row/column-lexicographic order."""
    rows, cols = len(m), len(m[0])
    if r > min(rows, cols):
        raise ValueError("minor order exceeds matrix size")
    out = []
    seen = set()
    for ri in itertools.combinations(range(rows), r):
        for ci in itertools.combinations(range(cols), r):
            v = det([[m[i][j] for j in ci] for i in ri])
            if not v:
                continue
            k = str(v) if isinstance(v, MPoly) else v
            if k in seen:
                continue
            seen.add(k)
            out.append(v)
    return out


def _field_matrix(m):
    out = []
    for row in m:
        out.append([x if isinstance(x, QuadExt) else Fraction(x) for x in row])
    return out


def rank_exact(m: Sequence[Sequence]) -> int:
    """Rank by fraction-free (Bareiss) elimination; exact for Q and Q[sqrt d]."""
    if not m or not m[0]:
        return 0
    a = _field_matrix(m)
    if all(not isinstance(x, QuadExt) for row in a for x in row):
        # clear denominators row by row so the elimination runs over Z
        ints = []
        for row in a:
            den = 1
            for x in row:
                den = den * x.denominator // _gcd(den, x.denominator)
            ints.append([int(x * den) for x in row])
        a = ints
    rows, cols = len(a), len(a[0])
    rank = 0
    prev = 1
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, rows):
            f = a[r][c]
            for k in range(c + 1, cols):
                v = a[r][k] * p - a[rank][k] * f
                a[r][k] = v // prev if isinstance(v, int) else v / prev
            a[r][c] = 0
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def nullspace(m: Sequence[Sequence]) -> list[list]:
    """Basis of the right kernel, each vector normalized so its last pivot-free entry is 1."""
    a = _field_matrix(m)
    rows, cols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * cols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fcol]
        basis.append(v)
    return basis


def rank_mod_p(m: Sequence[Sequence[int]], p: int) -> int:
    """Rank over GF(p) of an integer matrix."""
    a = [[x % p for x in row] for row in m]
    rows, cols = len(a), len(a[0]) if a else 0
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], p - 2, p)
        for r in range(rows):
            if r != rank and a[r][c]:
                f = a[r][c] * inv % p
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank
