"""Coordinates, alignment ideals and exact witnesses for incidence structures."""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import LEX, Ideal, MPoly, QuadExt, det3, groebner, roots_in_field
from .algebra.poly import PARAM_NAMES
from .combinatorics import (
    ALL_TRIPLES,
    NPOINTS,
    IncidenceStructure,
    Triple,
    canonical_key,
    compatible,
    make_structure,
)

log = logging.getLogger(__name__)

FRAME_COORDS = ((0, 0, 1), (1, 0, 1), (2, 0, 1), (0, 1, 1), (0, 2, 1))
FRAME_BLOCKS = ((0, 1, 2), (0, 3, 4))
DEFAULT_HEIGHTS = (1, 2, 3, 5, 8, 13)
DEFAULT_TRIALS = 64


class FrameMissingError(ValueError):
    """The structure lacks the blocks 012 and 034 and has level > 3."""


class InconclusiveError(RuntimeError):
    """Witness search exhausted without a decision."""


# ---------------------------------------------------------------------------
# parametrization


@dataclass
class ParamPoint:
    coords: tuple[MPoly, MPoly, MPoly]
    params: tuple[str, ...] = ()
    source: str = "frame"


@dataclass
class Parametrization:
    points: list[ParamPoint]
    ring: tuple[str, ...]
    nonzero: list[str] = field(default_factory=list)
    log: list[str] = field(default_factory=list)

    @property
    def nparams(self) -> int:
        return len(self.ring)

    def coords(self, i: int):
        return self.points[i].coords

    def evaluate(self, values: dict) -> list[tuple]:
        return [tuple(c.evaluate(values) for c in p.coords) for p in self.points]


def base_points(ring: Sequence[str] = ()) -> list[ParamPoint]:
    return [
        ParamPoint(tuple(MPoly.const(ring, c) for c in xyz), (), "frame")
        for xyz in FRAME_COORDS
    ]


def has_frame(s: IncidenceStructure) -> bool:
    return all(b in s for b in FRAME_BLOCKS)


def _choose_block(s: IncidenceStructure, p: int, placed: set[int]):
    """Block through ``p`` with both other points placed, preferring lines
    through two of the points 1..4, then the smallest (b, a)."""
    options = []
    for b in s.blocks:
        if p in b:
            a, c = (u for u in b if u != p)
            if a in placed and c in placed:
                options.append((a, c))
    if not options:
        return None
    frame = {1, 2, 3, 4}
    options.sort(key=lambda ac: (not (ac[0] in frame and ac[1] in frame), ac[1], ac[0]))
    return options[0]


def _plan(s: IncidenceStructure, start: int) -> list:
    placed = set(range(start))
    plan = []
    for p in range(start, NPOINTS):
        plan.append(_choose_block(s, p, placed))
        placed.add(p)
    return plan


def parametrize(s: IncidenceStructure) -> Parametrization:
    """Coordinates for the nine points: the fixed frame for 0..4, then each
    later point is ``P_a + t P_b`` on one block line through two earlier
    points, or a free affine point ``(u : v : 1)``."""
    if has_frame(s):
        start = 5
    elif s.level <= 3:
        start = 0
    else:
        raise FrameMissingError(f"{s} lacks blocks 012 and 034")
    plan = _plan(s, start)
    nparams = sum(1 if step else 2 for step in plan)
    ring = PARAM_NAMES[:nparams] if nparams <= len(PARAM_NAMES) else tuple(f"t{i}" for i in range(nparams))
    points = base_points(ring) if start == 5 else []
    nonzero = []
    logs = []
    k = 0
    for p, step in zip(range(start, NPOINTS), plan):
        if step:
            a, b = step
            t = ring[k]
            tv = MPoly.var(ring, t)
            k += 1
            coords = tuple(pa + tv * pb for pa, pb in zip(points[a].coords, points[b].coords))
            points.append(ParamPoint(coords, (t,), f"P{a} + {t}*P{b}"))
            nonzero.append(t)
            logs.append(f"P{p} = P{a} + {t}*P{b}")
        else:
            u, v = ring[k], ring[k + 1]
            k += 2
            coords = (MPoly.var(ring, u), MPoly.var(ring, v), MPoly.const(ring, 1))
            points.append(ParamPoint(coords, (u, v), "free"))
            logs.append(f"P{p} = ({u} : {v} : 1)")
    return Parametrization(points, tuple(ring), nonzero, logs)


def frame_labelings(s: IncidenceStructure):
    """Relabelings ``perm`` (old -> new) with ``s.relabel(perm)`` containing 012 and 034."""
    for p0 in range(NPOINTS):
        through = [b for b in s.blocks if p0 in b]
        if len(through) < 2:
            continue
        for b1, b2 in itertools.permutations(through, 2):
            r1 = [u for u in b1 if u != p0]
            r2 = [u for u in b2 if u != p0]
            for o1 in (r1, r1[::-1]):
                for o2 in (r2, r2[::-1]):
                    head = [p0, *o1, *o2]
                    rest = [u for u in range(NPOINTS) if u not in head]
                    for tail in itertools.permutations(rest):
                        perm = [0] * NPOINTS
                        for new, old in enumerate(head + list(tail)):
                            perm[old] = new
                        yield perm


def best_frame_labeling(s: IncidenceStructure) -> list[int] | None:
    """Frame relabeling with the fewest parameters (ties: smallest block list)."""
    best = None
    for perm in frame_labelings(s):
        t = s.relabel(perm)
        plan = _plan(t, 5)
        score = (sum(1 if st else 2 for st in plan), t.blocks)
        if best is None or score < best[0]:
            best = (score, perm)
    return None if best is None else best[1]


def alignment_ideal(p: Parametrization, s: IncidenceStructure) -> Ideal:
    gens = []
    for b in s.blocks:
        d = det3([p.coords(i) for i in b])
        if d:
            gens.append(d.primitive())
    return Ideal(gens, p.ring)


def triple_det(p: Parametrization, t: Sequence[int]) -> MPoly:
    return det3([p.coords(i) for i in t])


def _strip_monomial(f: MPoly) -> MPoly:
    """Divide out the largest monomial factor."""
    common = None
    for m in f.terms:
        common = m if common is None else tuple(min(a, b) for a, b in zip(common, m))
    if common is None or not any(common):
        return f
    return MPoly(f.gens, {tuple(a - b for a, b in zip(m, common)): c for m, c in f.terms.items()})


def degeneracy_polys(p: Parametrization, s: IncidenceStructure, triples=None) -> list[MPoly]:
    """Distinct non-constant determinants of the given (default: all non-block)
    triples, with monomial factors removed."""
    if triples is None:
        triples = [t for t in ALL_TRIPLES if t not in s]
    out: dict[str, MPoly] = {}
    for t in triples:
        d = triple_det(p, t)
        if not d:
            continue
        d = _strip_monomial(d).primitive()
        if d.is_constant():
            continue
        out.setdefault(str(d), d)
    return [out[k] for k in sorted(out, key=lambda k: (len(k), k))]


def param_product(p: Parametrization) -> MPoly | None:
    if not p.nonzero:
        return None
    f = MPoly.const(p.ring, 1)
    for t in p.nonzero:
        f = f * MPoly.var(p.ring, t)
    return f


def nondegenerate_part(ideal: Ideal, p: Parametrization) -> Ideal:
    f = param_product(p)
    return ideal.saturate(f) if f is not None else ideal


def saturate_degeneracies(ideal: Ideal, p: Parametrization, s: IncidenceStructure, triples=None) -> Ideal:
    out = nondegenerate_part(ideal, p)
    return out.saturate_all(degeneracy_polys(p, s, triples))


# ---------------------------------------------------------------------------
# witnesses


@dataclass
class Witness:
    points: list[tuple]
    structure: IncidenceStructure
    d: int | None = None
    params: dict | None = None

    @property
    def field(self) -> str:
        return "Q" if self.d is None else f"Q[sqrt({self.d})]"


def normalize_point(pt: Sequence):
    """Scale a projective point: primitive integers over Q, last nonzero coordinate 1 otherwise."""
    if all(not isinstance(c, QuadExt) or c.b == 0 for c in pt):
        vals = [c.a if isinstance(c, QuadExt) else Fraction(c) for c in pt]
        import math

        den = 1
        for v in vals:
            den = math.lcm(den, v.denominator)
        ints = [int(v * den) for v in vals]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        g = g or 1
        ints = [v // g for v in ints]
        lead = next((v for v in reversed(ints) if v), 1)
        if lead < 0:
            ints = [-v for v in ints]
        return tuple(Fraction(v) for v in ints)
    piv = next(c for c in reversed(pt) if c)
    return tuple(c / piv for c in pt)


def _cross(p, q):
    return (p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0])


def collinear_triples(points: Sequence[Sequence]) -> list[Triple]:
    return [t for t in ALL_TRIPLES if not det3([points[i] for i in t])]


def verify_witness(w: Witness | Sequence, s: IncidenceStructure | None = None) -> bool:
    points = w.points if isinstance(w, Witness) else list(w)
    if s is None:
        s = w.structure
    if len(points) != NPOINTS:
        return False
    for p in points:
        if not any(p):
            return False
    for p, q in itertools.combinations(points, 2):
        if not any(_cross(p, q)):
            return False
    blocks = set(s.blocks)
    for t in ALL_TRIPLES:
        zero = not det3([points[i] for i in t])
        if zero != (t in blocks):
            return False
    return True


def random_rational(rng: random.Random, height: int) -> Fraction:
    while True:
        num = rng.randint(-height, height)
        den = rng.randint(1, height)
        if num:
            return Fraction(num, den)


def _field_of(values) -> int | None:
    for v in values:
        if isinstance(v, QuadExt) and v.b != 0:
            return v.d
    return None


def solve_zero_dim(polys: Sequence[MPoly], variables: Sequence[str], allow_extension: bool, limit: int = 32):
    """All solutions in Q (or one quadratic extension) of a zero-dimensional
    system, by back substitution through a lex basis.  ``None`` signals a
    positive-dimensional system."""
    ring = polys[0].gens if polys else ()
    variables = [v for v in ring if v in variables]
    if not variables:
        return [{}] if all(not p for p in polys) else []
    lring = tuple(variables)
    lp = [p.change_ring(lring) for p in polys if p]
    gb = groebner(lp, LEX)
    if not gb:
        return None
    if len(gb) == 1 and gb[0].is_constant():
        return []
    lms = [g.lm(LEX) for g in gb]
    for i in range(len(lring)):
        if not any(m[i] and sum(m) == m[i] for m in lms):
            return None
    sols: list[dict] = [{}]
    for i in range(len(lring) - 1, -1, -1):
        var = lring[i]
        later = set(lring[i + 1:])
        relevant = [g for g in gb if g.degree(var) > 0 and set(g.variables()) <= later | {var}]
        nxt = []
        for sol in sols:
            d = _field_of(sol.values())
            uni = None
            for g in relevant:
                h = g.subs(sol) if sol else g
                coeffs = h.as_univariate(var) if h.variables() else [h.constant_coeff()]
                from .algebra.univariate import poly_gcd

                uni = coeffs if uni is None else poly_gcd(uni, coeffs)
            if uni is None or len(uni) <= 1:
                continue
            try:
                roots = roots_in_field(uni, d, allow_extension and d is None)
            except ArithmeticError:
                roots = []
            if d is not None:
                roots = [r if isinstance(r, QuadExt) else QuadExt(r, 0, d) for r in roots]
            for r in roots:
                if not allow_extension and isinstance(r, QuadExt) and r.b != 0:
                    continue
                nxt.append({**sol, var: r})
                if len(nxt) >= limit:
                    break
        sols = nxt
        if not sols:
            return []
    return sols


def _specialize(gb: Sequence[MPoly], values: dict) -> list[MPoly]:
    out = []
    for g in gb:
        h = g.subs(values)
        if h:
            out.append(h)
    return out


def _attempt(ideal: Ideal, free: Sequence[str], rng: random.Random, height: int, allow_extension: bool, depth: int = 0):
    values = {v: random_rational(rng, height) for v in free}
    rest = [v for v in ideal.ring if v not in values]
    polys = _specialize(ideal.groebner(), values)
    if any(p.is_constant() for p in polys):
        return []
    if not polys:
        sols = [{}] if not rest else None
    else:
        sols = solve_zero_dim(polys, rest, allow_extension)
    if sols is None:
        if depth >= 2:
            return []
        sub = Ideal(polys, ideal.ring) if polys else Ideal([], ideal.ring)
        extra = [v for v in sub.independent_set() if v not in values]
        if not extra:
            return []
        more = _attempt(sub, extra, rng, height, allow_extension, depth + 1)
        return [{**values, **m} for m in more]
    return [{**values, **s} for s in sols]


def find_witness(
    s: IncidenceStructure,
    ideal: Ideal | None = None,
    param: Parametrization | None = None,
    heights: Sequence[int] = DEFAULT_HEIGHTS,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    allow_extension: bool = True,
    accept=None,
    *,
    height_bound: int | None = None,
    extension_only: bool = False,
) -> Witness | None:
    """Seeded random specialization of independent parameters followed by
    exact solving of the residual system; returns the first verified witness.

    ``accept`` is an optional extra predicate on candidate witnesses;
    ``height_bound`` truncates the height schedule.
    """
    if height_bound is not None:
        heights = [h for h in heights if h <= height_bound]
    if param is None:
        param = parametrize(s)
    if ideal is None:
        ideal = nondegenerate_part(alignment_ideal(param, s), param)
    if ideal.is_unit():
        return None
    free = ideal.independent_set()
    rng = random.Random(seed)
    passes = [False, True] if allow_extension else [False]
    if extension_only:
        passes = [True]
    for ext in passes:
        for h in heights:
            for _ in range(trials):
                for sol in _attempt(ideal, free, rng, h, ext):
                    if len(sol) != len(param.ring):
                        continue
                    pts = [normalize_point(p) for p in param.evaluate(sol)]
                    w = Witness(pts, s, _field_of(c for p in pts for c in p), sol)
                    if verify_witness(w, s) and (accept is None or accept(w)):
                        return w
    return None


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class RealizabilityVerdict:
    kind: str  # "Q", "QuadExt", "Forces", "None", "Inconclusive"
    witness: Witness | None = None
    d: int | None = None
    forced: list[Triple] = field(default_factory=list)
    target_key: str | None = None
    target_level: int | None = None
    certificate: list[str] = field(default_factory=list)
    labeling: list[int] | None = None

    @property
    def realizable(self) -> bool:
        return self.kind in ("Q", "QuadExt")


def framed(s: IncidenceStructure) -> tuple[IncidenceStructure, list[int]]:
    """A frame-containing copy of ``s`` (or ``s`` itself) and the relabeling used."""
    if has_frame(s) or s.level <= 3 and best_frame_labeling(s) is None:
        return s, list(range(NPOINTS))
    perm = best_frame_labeling(s)
    if perm is None:
        raise FrameMissingError(str(s))
    return s.relabel(perm), perm


def _pull_back(points: Sequence, perm: Sequence[int]) -> list:
    """Points indexed by new labels -> indexed by old labels."""
    return [points[perm[old]] for old in range(NPOINTS)]


def pull_back_witness(w: Witness, s: IncidenceStructure, perm: Sequence[int]) -> Witness:
    return Witness(_pull_back(w.points, perm), s, w.d, w.params)


def _inverse(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for a, b in enumerate(perm):
        inv[b] = a
    return inv


def forced_collinearities(s: IncidenceStructure) -> set[Triple]:
    """Compatible non-block triples collinear on every nondegenerate realization.

    Degenerate loci (coincident points, triples clashing with a block) are
    removed by saturation before the radical-membership tests.
    """
    t, perm = framed(s)
    p = parametrize(t)
    base = _incompatible_saturation(p, t)
    if base.is_unit():
        return set()
    inv = _inverse(perm)
    out = set()
    for tau in ALL_TRIPLES:
        if tau in t or not compatible(t, tau):
            continue
        if base.in_radical(triple_det(p, tau)):
            out.add(tuple(sorted(inv[i] for i in tau)))
    return out


def _incompatible_saturation(p: Parametrization, s: IncidenceStructure) -> Ideal:
    bad = [tau for tau in ALL_TRIPLES if tau not in s and not compatible(s, tau)]
    return saturate_degeneracies(alignment_ideal(p, s), p, s, bad)


def classify_realizability(
    s: IncidenceStructure,
    heights: Sequence[int] = DEFAULT_HEIGHTS,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    quick_trials: int = 4,
) -> RealizabilityVerdict:
    """Realizability over Q, over a quadratic field, with forced extra
    collinearities, or not at all.  Raises InconclusiveError when the search
    cannot decide."""
    t, perm = framed(s)
    p = parametrize(t)
    base = nondegenerate_part(alignment_ideal(p, t), p)

    def done(w: Witness) -> RealizabilityVerdict:
        back = pull_back_witness(w, s, perm)
        kind = "Q" if w.d is None else "QuadExt"
        return RealizabilityVerdict(kind, back, w.d, labeling=perm)

    if not base.is_unit():
        w = find_witness(t, base, p, heights[:3], quick_trials, seed, allow_extension=False)
        if w is not None:
            return done(w)

    exact = saturate_degeneracies(base, p, t)
    if exact.is_unit():
        inc = _incompatible_saturation(p, t)
        if inc.is_unit():
            return RealizabilityVerdict("None", certificate=[str(g) for g in inc.groebner()], labeling=perm)
        inv = _inverse(perm)
        forced = sorted(
            tuple(sorted(inv[i] for i in tau))
            for tau in ALL_TRIPLES
            if tau not in t and compatible(t, tau) and inc.in_radical(triple_det(p, tau))
        )
        if not forced:
            return RealizabilityVerdict("None", certificate=["1"], labeling=perm)
        try:
            target = make_structure(list(s.blocks) + forced)
        except ValueError:
            return RealizabilityVerdict("None", forced=forced, certificate=["1"], labeling=perm)
        return RealizabilityVerdict(
            "Forces", forced=forced, target_key=canonical_key(target), target_level=target.level, labeling=perm
        )

    w = find_witness(t, exact, p, heights, trials, seed)
    if w is not None:
        return done(w)
    raise InconclusiveError(f"no witness for {s} within heights {list(heights)}")
