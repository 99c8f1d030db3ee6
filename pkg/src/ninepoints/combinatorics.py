"""Incidence structures of nine points and their isomorph-free enumeration.

A structure is a set of collinear triples (blocks) over the labels 0..8 such
that two blocks share at most one label.  Isomorphism classes are decided by a
canonical key obtained from individualization/refinement search.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

NPOINTS = 9
MAX_LEVEL = 12

Triple = tuple[int, int, int]

ALL_TRIPLES: tuple[Triple, ...] = tuple(itertools.combinations(range(NPOINTS), 3))


class SharedPairError(ValueError):
    """Two blocks share two labels (four collinear points)."""


def make_triple(i: int, j: int, k: int) -> Triple:
    t = tuple(sorted((int(i), int(j), int(k))))
    if len(set(t)) != 3 or t[0] < 0 or t[2] >= NPOINTS:
        raise ValueError(f"invalid triple {(i, j, k)}")
    return t  # type: ignore[return-value]


def parse_triple(text: str | Sequence[int]) -> Triple:
    """Accept ``"012"``, ``"0,1,2"`` or a 3-sequence of ints."""
    if isinstance(text, str):
        digits = [c for c in text if c.isdigit()]
        return make_triple(*map(int, digits))
    return make_triple(*text)


@dataclass(frozen=True)
class IncidenceStructure:
    blocks: tuple[Triple, ...] = ()

    @property
    def level(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __contains__(self, t) -> bool:
        return tuple(sorted(t)) in self._block_set

    @property
    def _block_set(self) -> frozenset:
        return frozenset(self.blocks)

    def degree(self, p: int) -> int:
        return sum(p in b for b in self.blocks)

    def add(self, *triples) -> "IncidenceStructure":
        return make_structure(list(self.blocks) + [parse_triple(t) for t in triples])

    def relabel(self, perm: Sequence[int]) -> "IncidenceStructure":
        """Image under the map ``i -> perm[i]``."""
        return IncidenceStructure(
            tuple(sorted(tuple(sorted(perm[i] for i in b)) for b in self.blocks))
        )

    def __str__(self) -> str:
        return "{" + ", ".join("".join(map(str, b)) for b in self.blocks) + "}"


def make_structure(blocks: Iterable) -> IncidenceStructure:
    triples = sorted({parse_triple(b) for b in blocks})
    for a, b in itertools.combinations(triples, 2):
        if len(set(a) & set(b)) >= 2:
            raise SharedPairError(f"blocks {a} and {b} share two points")
    return IncidenceStructure(tuple(triples))


def structure(spec: str) -> IncidenceStructure:
    """Parse the compact notation ``"012, 034, 135"``."""
    parts = [p for p in spec.replace("{", " ").replace("}", " ").replace(",", " ").split() if p]
    return make_structure(parts)


def compatible(s: IncidenceStructure, t: Sequence[int]) -> bool:
    ts = set(t)
    return all(len(ts.intersection(b)) <= 1 for b in s.blocks)


def incompatible_with(s: IncidenceStructure, t: Sequence[int]) -> list[Triple]:
    ts = set(t)
    return [b for b in s.blocks if len(ts.intersection(b)) >= 2 and b != tuple(sorted(t))]


# ---------------------------------------------------------------------------
# canonical form


def _refine(cells: list[list[int]], incident: list[list[tuple[int, int]]]) -> list[list[int]]:
    """Refine an ordered partition until every cell is uniform with respect to
    the cell-multiset of block partners."""
    while True:
        where = {}
        for ci, cell in enumerate(cells):
            for v in cell:
                where[v] = ci
        out: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            sig = {}
            for v in cell:
                sig[v] = tuple(sorted(tuple(sorted((where[a], where[b]))) for a, b in incident[v]))
            groups: dict = {}
            for v in cell:
                groups.setdefault(sig[v], []).append(v)
            if len(groups) > 1:
                changed = True
            for key in sorted(groups):
                out.append(groups[key])
        cells = out
        if not changed:
            return cells


class _Search:
    def __init__(self, s: IncidenceStructure):
        self.blocks = s.blocks
        self.incident: list[list[tuple[int, int]]] = [[] for _ in range(NPOINTS)]
        for b in s.blocks:
            for v in b:
                self.incident[v].append(tuple(u for u in b if u != v))
        self.isolated = [v for v in range(NPOINTS) if not self.incident[v]]
        self.best: tuple | None = None
        self.best_count = 0
        self.best_perm: list[int] | None = None

    def run(self):
        active = [v for v in range(NPOINTS) if self.incident[v]]
        cells: list[list[int]] = []
        if active:
            by_deg: dict = {}
            for v in active:
                by_deg.setdefault(len(self.incident[v]), []).append(v)
            cells = [by_deg[d] for d in sorted(by_deg, reverse=True)]
            cells = _refine(cells, self.incident)
        self._descend(cells)

    def _descend(self, cells):
        for ci, cell in enumerate(cells):
            if len(cell) > 1:
                for v in cell:
                    rest = [u for u in cell if u != v]
                    new = cells[:ci] + [[v], rest] + cells[ci + 1:]
                    self._descend(_refine(new, self.incident))
                return
        perm = [0] * NPOINTS
        for pos, cell in enumerate(cells):
            perm[cell[0]] = pos
        for off, v in enumerate(self.isolated):
            perm[v] = len(cells) + off
        image = tuple(sorted(tuple(sorted(perm[i] for i in b)) for b in self.blocks))
        if self.best is None or image < self.best:
            self.best, self.best_count, self.best_perm = image, 1, perm
        elif image == self.best:
            self.best_count += 1


def _search(s: IncidenceStructure) -> _Search:
    srch = _Search(s)
    srch.run()
    return srch


def key_string(blocks: Iterable[Triple]) -> str:
    return ",".join("".join(map(str, b)) for b in blocks)


def canonical_form(s: IncidenceStructure) -> IncidenceStructure:
    return IncidenceStructure(_search(s).best)


def canonical_key(s: IncidenceStructure) -> str:
    """Label-invariant key; equal keys iff isomorphic structures.

    The key spells out the least block list, in the ``ijk,ijk,...`` notation,
    among all relabelings compatible with the refined point partition.
    """
    return key_string(_search(s).best)


def canonical_labeling(s: IncidenceStructure) -> list[int]:
    """A permutation ``perm`` with ``s.relabel(perm) == canonical_form(s)``."""
    return list(_search(s).best_perm)


def isomorphic(a: IncidenceStructure, b: IncidenceStructure) -> bool:
    if a.level != b.level:
        return False
    return canonical_key(a) == canonical_key(b)


def automorphism_count(s: IncidenceStructure) -> int:
    srch = _search(s)
    return srch.best_count * math.factorial(len(srch.isolated))


def isomorphism(a: IncidenceStructure, b: IncidenceStructure) -> list[int] | None:
    """A permutation mapping ``a`` onto ``b``, or None."""
    sa, sb = _search(a), _search(b)
    if sa.best != sb.best:
        return None
    inv_b = [0] * NPOINTS
    for v, pos in enumerate(sb.best_perm):
        inv_b[pos] = v
    return [inv_b[sa.best_perm[v]] for v in range(NPOINTS)]


# ---------------------------------------------------------------------------
# enumeration


@dataclass
class LevelCatalog:
    levels: dict[int, list[IncidenceStructure]] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return max((lv for lv, xs in self.levels.items() if xs), default=0)

    def counts(self) -> list[int]:
        return [len(self.levels.get(lv, [])) for lv in range(1, self.m + 1)]

    def __iter__(self):
        for lv in sorted(self.levels):
            yield from self.levels[lv]

    def __len__(self) -> int:
        return sum(len(xs) for xs in self.levels.values())


def extend_level(level_list: Sequence[IncidenceStructure]) -> list[IncidenceStructure]:
    found: dict[str, IncidenceStructure] = {}
    for s in level_list:
        for t in ALL_TRIPLES:
            if t in s or not compatible(s, t):
                continue
            srch = _search(IncidenceStructure(tuple(sorted(s.blocks + (t,)))))
            key = key_string(srch.best)
            if key not in found:
                found[key] = IncidenceStructure(srch.best)
    return [found[k] for k in sorted(found)]


def enumerate_all() -> LevelCatalog:
    cat = LevelCatalog()
    current = [canonical_form(IncidenceStructure(((0, 1, 2),)))]
    level = 1
    while current:
        cat.levels[level] = current
        current = extend_level(current)
        level += 1
    return cat
