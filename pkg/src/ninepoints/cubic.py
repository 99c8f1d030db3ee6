"""Which realizable structures fit on an irreducible plane cubic, and the
Hilbert functions of the resulting nine-point sets."""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import Ideal, MPoly, QuadExt, minors, nullspace, rank_exact, roots_in_field
from .algebra.poly import XYZ
from .algebra.univariate import poly_gcd, squarefree
from .combinatorics import (
    NPOINTS,
    IncidenceStructure,
    Triple,
    canonical_key,
    make_structure,
)
from .realization import (
    DEFAULT_HEIGHTS,
    DEFAULT_TRIALS,
    InconclusiveError,
    Parametrization,
    RealizabilityVerdict,
    Witness,
    alignment_ideal,
    find_witness,
    framed,
    has_frame,
    nondegenerate_part,
    normalize_point,
    parametrize,
    pull_back_witness,
    saturate_degeneracies,
    verify_witness,
)

log = logging.getLogger(__name__)

CUBIC_MONOMIALS = ((3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1), (1, 0, 2), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3))
FAMILY_PARAMS = ("a", "b", "c", "d", "e")


class DegenerateInputError(ValueError):
    """Point set violates the rank bounds for nine points on an irreducible cubic."""


def monomials(d: int) -> list[tuple[int, int, int]]:
    """Degree-d exponent vectors, x-major: x^d, x^(d-1)y, x^(d-1)z, ..."""
    return [(a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1)]


def _mono_value(pt, e):
    v = 1
    for c, k in zip(pt, e):
        if k:
            v = v * c**k
    return v


# ---------------------------------------------------------------------------
# cubic forms


@dataclass(frozen=True)
class CubicForm:
    """Ten coefficients in the order of ``CUBIC_MONOMIALS``."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != 10:
            raise ValueError("a cubic form has 10 coefficients")
        if not any(self.coeffs):
            raise ValueError("zero cubic form")

    def to_mpoly(self) -> MPoly:
        return MPoly(XYZ, {e: c for e, c in zip(CUBIC_MONOMIALS, self.coeffs) if c})

    def __call__(self, pt):
        return sum((c * _mono_value(pt, e) for c, e in zip(self.coeffs, CUBIC_MONOMIALS) if c), 0)

    def __str__(self):
        return str(self.to_mpoly())

    @classmethod
    def from_mpoly(cls, f: MPoly) -> "CubicForm":
        f = f.change_ring(XYZ)
        return cls(tuple(f.terms.get(e, Fraction(0)) for e in CUBIC_MONOMIALS))

    def primitive(self) -> "CubicForm":
        """Integer coefficients with positive leading entry when rational; otherwise
        scaled so the first nonzero coefficient is 1."""
        if all(not isinstance(c, QuadExt) or c.b == 0 for c in self.coeffs):
            return CubicForm(tuple(Fraction(v) for v in normalize_point([_rat(c) for c in reversed(self.coeffs)])[::-1]))
        lead = next(c for c in self.coeffs if c)
        return CubicForm(tuple(c / lead for c in self.coeffs))


def _rat(c):
    return c.a if isinstance(c, QuadExt) else Fraction(c)


@dataclass(frozen=True)
class CubicFamily:
    """Cubic coefficients as linear forms in the family parameters (10 x 5)."""

    matrix: tuple

    def specialize(self, values: Sequence) -> CubicForm:
        return CubicForm(tuple(sum((r * v for r, v in zip(row, values)), Fraction(0)) for row in self.matrix))

    def to_mpoly(self) -> MPoly:
        ring = FAMILY_PARAMS + XYZ
        out = MPoly(ring)
        for row, e in zip(self.matrix, CUBIC_MONOMIALS):
            for k, c in enumerate(row):
                if c:
                    mono = tuple(1 if i == k else 0 for i in range(5)) + e
                    out = out + MPoly(ring, {mono: c})
        return out


def cubic_family_through_frame() -> CubicFamily:
    """Cubics through (0:0:1), (1:0:1), (2:0:1), (0:1:1), (0:2:1)."""
    h = Fraction(1, 2)
    rows = {
        (3, 0, 0): (1, 0, 0, 0, 0),
        (2, 1, 0): (0, 1, 0, 0, 0),
        (2, 0, 1): (-3, 0, 0, 0, 0),
        (1, 2, 0): (0, 0, 1, 0, 0),
        (1, 1, 1): (0, 0, 0, 0, 1),
        (1, 0, 2): (2, 0, 0, 0, 0),
        (0, 3, 0): (0, 0, 0, h, 0),
        (0, 2, 1): (0, 0, 0, -3 * h, 0),
        (0, 1, 2): (0, 0, 0, 1, 0),
        (0, 0, 3): (0, 0, 0, 0, 0),
    }
    return CubicFamily(tuple(tuple(Fraction(v) for v in rows[e]) for e in CUBIC_MONOMIALS))


# ---------------------------------------------------------------------------
# irreducibility


def _field_d(values) -> int | None:
    for v in values:
        if isinstance(v, QuadExt) and v.b != 0:
            return v.d
    return None


def _affine_singular(partials: list[MPoly]) -> tuple[int, list] | None:
    """Distinct common zeros in the chart z = 1: (count over the closure, the
    point when the count is 1).  ``None`` when the locus is a curve."""
    ring = ("x", "y")
    polys = [p.subs({"z": 1}).change_ring(ring) for p in partials]
    polys = [p for p in polys if p]
    if not polys:
        return None
    ideal = Ideal(polys, ring)
    if ideal.is_unit():
        return 0, []
    if ideal.dimension() > 0:
        return None
    # Seidenberg: adjoin square-free eliminants to get the radical
    extra = []
    for v, other in (("x", "y"), ("y", "x")):
        uni = next(g for g in ideal.eliminate([other]).groebner() if g.variables() == [v])
        sf = squarefree(uni.as_univariate(v))
        extra.append(sum((MPoly.var(ring, v) ** i * c for i, c in enumerate(sf) if c), MPoly(ring)))
    rad = ideal + extra
    gb = rad.groebner()
    lms = [g.lm() for g in gb]
    count = 0
    for i in range(9):
        for j in range(9):
            if not any(m[0] <= i and m[1] <= j for m in lms):
                count += 1
    if count != 1:
        return count, []
    pt = []
    for v in ring:
        g = next(g for g in gb if g.variables() == [v])
        c = g.as_univariate(v)
        pt.append(-c[0] / c[1])
    return 1, [(pt[0], pt[1], 1)]


def singular_points(f: MPoly) -> list | None:
    """Singular points of a cubic as a list when there is at most one, a list
    of placeholders (length = count) otherwise, ``None`` for a singular curve."""
    partials = [f.diff(v) for v in XYZ]
    res = _affine_singular(partials)
    if res is None:
        return None
    count, pts = res
    # line at infinity, chart y = 1
    uni = None
    for p in partials:
        q = p.subs({"z": 0, "y": 1}).change_ring(("x",))
        c = q.as_univariate("x") if q.variables() else ([q.constant_coeff()] if q else [])
        if c:
            uni = c if uni is None else poly_gcd(uni, c)
    if uni is None:
        return None
    if len(uni) > 1:
        sf = squarefree(uni)
        k = len(sf) - 1
        count += k
        if k == 1:
            pts.append((-sf[0] / sf[1], 1, 0))
    if all(not p.evaluate({"x": 1, "y": 0, "z": 0}) for p in partials):
        count += 1
        pts.append((1, 0, 0))
    if count == 1:
        return pts
    return [None] * count


def _vanishes_on_line(f: MPoly, p, q) -> bool:
    for a, b in ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2)):
        pt = {v: a * pc + b * qc for v, pc, qc in zip(XYZ, p, q)}
        if f.evaluate(pt):
            return False
    return True


def _tangent_lines(f: MPoly, p) -> list | None:
    """Second points q_i so that the lines p q_i make up the tangent cone at the
    singular point p; ``None`` for a triple point."""
    at = {v: c for v, c in zip(XYZ, p)}
    h = [[f.diff(u).diff(v).evaluate(at) for v in XYZ] for u in XYZ]
    if not any(any(row) for row in h):
        return None

    def form(a, b):
        return sum((a[i] * h[i][j] * b[j] for i in range(3) for j in range(3)), 0)

    cands = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3)]
    from .algebra import det3

    for a, b in itertools.combinations(cands, 2):
        if det3([p, a, b]):
            break
    coeffs = [form(a, a), 2 * form(a, b), form(b, b)]
    d = _field_d(list(coeffs))
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    out = []
    if len(coeffs) < 3:
        out.append(b)  # root at infinity
    if len(coeffs) >= 2:
        for s in roots_in_field(coeffs, d, True):
            out.append(tuple(x + s * y for x, y in zip(a, b)))
    return out


def is_irreducible(c: CubicForm | MPoly) -> bool:
    """Exact irreducibility test through the singular locus.

    A smooth cubic is irreducible.  A reducible cubic has a line component and
    therefore either a curve of singular points, at least two singular points,
    or a single singular point whose tangent cone contains that line.
    """
    f = c.to_mpoly() if isinstance(c, CubicForm) else c.change_ring(XYZ)
    if not f or f.total_degree() != 3:
        raise ValueError("not a cubic form")
    pts = singular_points(f)
    if pts is None:
        return False
    if not pts:
        return True
    if len(pts) > 1:
        return False
    p = pts[0]
    lines = _tangent_lines(f, p)
    if lines is None:
        return False
    return not any(_vanishes_on_line(f, p, q) for q in lines)


# ---------------------------------------------------------------------------
# linear systems of curves through points


def constraint_matrix(points: Sequence[Sequence], d: int) -> list[list]:
    if d < 1:
        raise ValueError("degree must be positive")
    mons = monomials(d)
    return [[_mono_value(pt, e) for e in mons] for pt in points]


def hilbert_profile(points: Sequence[Sequence]) -> tuple[int, ...]:
    """Hilbert function of the point ideal in degrees 0.. until it reaches 9."""
    r1 = rank_exact(constraint_matrix(points, 1))
    r2 = rank_exact(constraint_matrix(points, 2))
    r3 = rank_exact(constraint_matrix(points, 3))
    if r1 != 3 or r2 != 6 or r3 < 8:
        raise DegenerateInputError(f"ranks {r1}, {r2}, {r3} in degrees 1..3")
    if r3 == 9:
        return (1, 3, 6, 9)
    r4 = rank_exact(constraint_matrix(points, 4))
    if r4 != 9:
        raise DegenerateInputError(f"rank {r4} in degree 4")
    return (1, 3, 6, 8, 9)


def cubics_through(points: Sequence[Sequence]) -> list[list]:
    """Basis of the space of cubic forms through the points."""
    return nullspace(constraint_matrix(points, 3))


def _combinations(n: int):
    yield from ((i,) for i in range(n))
    if n < 2:
        return
    for k in (1, 2, -1, 3, -2, 5):
        for i, j in itertools.permutations(range(n), 2):
            if i < j:
                yield (i, j, k)


def irreducible_member(points: Sequence[Sequence]) -> CubicForm | None:
    """First irreducible cubic in a fixed sequence of kernel combinations:
    basis vectors, then v_i + k v_j for small k."""
    basis = cubics_through(points)
    if not basis or len(basis) > 3:
        return None
    for combo in _combinations(len(basis)):
        if len(combo) == 1:
            vec = basis[combo[0]]
        else:
            i, j, k = combo
            vec = [u + k * w for u, w in zip(basis[i], basis[j])]
        if not any(vec):
            continue
        form = CubicForm(tuple(vec))
        if is_irreducible(form):
            return form.primitive()
    return None


# ---------------------------------------------------------------------------
# Cayley-Bacharach


def covering_partitions(s: IncidenceStructure | Sequence[Triple]) -> list[tuple[Triple, Triple, Triple]]:
    blocks = s.blocks if isinstance(s, IncidenceStructure) else sorted(s)
    return [
        trio
        for trio in itertools.combinations(blocks, 3)
        if len(set(trio[0]) | set(trio[1]) | set(trio[2])) == NPOINTS
    ]


@dataclass
class CBOutcome:
    forced: list[Triple] = field(default_factory=list)
    conflicts: list[tuple[Triple, Triple]] = field(default_factory=list)  # (complement, clashing block)

    @property
    def clean(self) -> bool:
        return not self.forced and not self.conflicts


def cb_filter(s: IncidenceStructure) -> CBOutcome:
    """Collinearities implied on an irreducible cubic by three blocks covering
    the points plus two disjoint blocks, iterated to a fixed point."""
    blocks = set(s.blocks)
    out = CBOutcome()
    everything = frozenset(range(NPOINTS))
    while True:
        new = []
        if covering_partitions(sorted(blocks)):
            for b1, b2 in itertools.combinations(sorted(blocks), 2):
                if set(b1) & set(b2):
                    continue
                b3 = tuple(sorted(everything - set(b1) - set(b2)))
                if b3 in blocks or b3 in new:
                    continue
                clash = next((b for b in sorted(blocks) if len(set(b) & set(b3)) >= 2), None)
                if clash is not None:
                    out.conflicts.append((b3, clash))
                else:
                    new.append(b3)
        if out.conflicts:
            return out
        # two forced triples may clash with each other
        for u, v in itertools.combinations(new, 2):
            if len(set(u) & set(v)) >= 2:
                out.conflicts.append((v, u))
                return out
        if not new:
            return out
        out.forced.extend(sorted(new))
        blocks.update(new)


# ---------------------------------------------------------------------------
# extra-cubic ideal


def family_matrix(p: Parametrization, rows: Sequence[int] = (5, 6, 7, 8)) -> list[list[MPoly]]:
    """Conditions for the frame cubic family to pass through the given points."""
    fam = cubic_family_through_frame()
    out = []
    for i in rows:
        pt = p.coords(i)
        vals = [_mono_value(pt, e) for e in CUBIC_MONOMIALS]
        out.append([sum((v * fam.matrix[k][j] for k, v in enumerate(vals) if fam.matrix[k][j]), MPoly(p.ring)) for j in range(5)])
    return out


def extra_cubic_ideal(p: Parametrization, s: IncidenceStructure, saturate: bool = True) -> Ideal:
    """Alignment ideal plus the maximal minors of the family matrix; with
    ``saturate`` the parameter and degeneracy loci are removed."""
    gens = [m.primitive() for m in minors(family_matrix(p), 4)]
    ideal = alignment_ideal(p, s) + gens
    if not saturate:
        return ideal
    return saturate_degeneracies(ideal, p, s)


# ---------------------------------------------------------------------------
# classification


@dataclass
class CubicClass:
    kind: str  # "A", "B", "C"
    witness: Witness | None = None
    cubic: CubicForm | None = None
    extra: list[Triple] = field(default_factory=list)
    target_key: str | None = None
    target_level: int | None = None
    reason: str = ""

    @property
    def on_cubic(self) -> bool:
        return self.kind == "A"


def cuspidal_witness(s: IncidenceStructure, seed: int = 0, trials: int = 64) -> Witness | None:
    """Points (t : 1 : t^3) on y^2 z = x^3; three of them are collinear exactly
    when their parameters sum to zero, so the block conditions are linear."""
    rows = [[1 if i in b else 0 for i in range(NPOINTS)] for b in s.blocks]
    basis = nullspace(rows) if rows else [[Fraction(int(i == j)) for i in range(NPOINTS)] for j in range(NPOINTS)]
    if not basis:
        return None
    rng = random.Random(seed)
    for trial in range(trials):
        height = 8 * (trial + 1)
        coef = [rng.randint(-height, height) for _ in basis]
        ts = [sum((c * v[i] for c, v in zip(coef, basis)), Fraction(0)) for i in range(NPOINTS)]
        pts = [normalize_point((t, Fraction(1), t**3)) for t in ts]
        w = Witness(pts, s, None, None)
        if verify_witness(w, s):
            return w
    return None


def _with_cubic(w: Witness) -> CubicForm | None:
    return irreducible_member(w.points)


def classify_on_cubic(
    s: IncidenceStructure,
    v: RealizabilityVerdict,
    seed: int = 0,
    heights: Sequence[int] = DEFAULT_HEIGHTS,
    trials: int = DEFAULT_TRIALS,
    quick_trials: int = 4,
) -> CubicClass:
    """Type A: an exact witness on an irreducible cubic.  Type B: a cubic
    forces further collinearities (target structure reported).  Type C: no
    irreducible cubic through such points."""
    if v.kind == "None":
        raise ValueError("structure is not realizable")
    if v.kind == "Forces":
        target = make_structure(list(s.blocks) + list(v.forced))
        return CubicClass("B", extra=list(v.forced), target_key=canonical_key(target), target_level=target.level,
                          reason="collinearities forced in the plane")
    cb = cb_filter(s)
    if cb.conflicts:
        b3, clash = cb.conflicts[0]
        return CubicClass("C", reason=f"forced triple {''.join(map(str, b3))} meets block {''.join(map(str, clash))} twice")
    if cb.forced:
        target = make_structure(list(s.blocks) + cb.forced)
        return CubicClass("B", extra=cb.forced, target_key=canonical_key(target), target_level=target.level,
                          reason="Cayley-Bacharach")

    t, perm = framed(s)
    p = parametrize(t)

    def accept(cand: Witness) -> bool:
        return _with_cubic(cand) is not None

    def done(cand: Witness, relabeled: bool = True) -> CubicClass:
        back = pull_back_witness(cand, s, perm) if relabeled else cand
        return CubicClass("A", back, irreducible_member(back.points))

    base = nondegenerate_part(alignment_ideal(p, t), p)
    triangles = covering_partitions(t)
    extra = None
    # every rational attempt comes before any quadratic extension
    for ext in (False, True):
        opts = dict(accept=accept, allow_extension=ext, extension_only=ext)
        cand = find_witness(t, base, p, heights[:2], quick_trials, seed, **opts)
        if cand is not None:
            return done(cand)
        if not ext:
            w = cuspidal_witness(s, seed)
            if w is not None and accept(w):
                return done(w, relabeled=False)
        if not triangles:
            cand = find_witness(t, base, p, heights, trials, seed, **opts)
            if cand is not None:
                return done(cand)
            continue
        if not has_frame(t):
            continue
        # the three block lines always give a cubic, so a second one is needed
        if extra is None:
            extra = extra_cubic_ideal(p, t)
            if extra.is_unit():
                return CubicClass("C", reason="only the reducible cubic of a covering partition")
        cand = find_witness(t, extra, p, heights, trials, seed, **opts)
        if cand is not None:
            return done(cand)
    raise InconclusiveError(f"no irreducible cubic witness for {s}")
