"""Catalog stages: enumerate, realize, classify on cubics, Hilbert profiles,
summary table, figures and certificate re-verification."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import goldens
from .algebra import QuadExt, format_field, parse_field
from .combinatorics import (
    MAX_LEVEL,
    IncidenceStructure,
    automorphism_count,
    canonical_key,
    compatible,
    enumerate_all,
    make_structure,
)
from .cubic import (
    CubicForm,
    DegenerateInputError,
    classify_on_cubic,
    hilbert_profile,
    is_irreducible,
)
from .realization import (
    DEFAULT_HEIGHTS,
    InconclusiveError,
    RealizabilityVerdict,
    Witness,
    classify_realizability,
    framed,
    parametrize,
    saturate_degeneracies,
    alignment_ideal,
    verify_witness,
)

log = logging.getLogger(__name__)

CATALOG_NAME = "catalog.json"
EXIT_OK, EXIT_VERIFY, EXIT_INCONCLUSIVE, EXIT_IO = 0, 1, 2, 3
SCHEMATIC_ROOT = (5**0.5 - 1) / 2


@dataclass
class RunConfig:
    seed: int = 0
    heights: tuple[int, ...] = DEFAULT_HEIGHTS
    out: Path = Path("out")
    levels: tuple[int, int] | None = None
    quadratic_only: bool = True

    def __post_init__(self):
        self.out = Path(self.out)
        self.heights = tuple(self.heights)
        if not self.heights or list(self.heights) != sorted(set(self.heights)):
            raise ValueError("height schedule must be nonempty and increasing")
        if not self.quadratic_only:
            raise ValueError("only quadratic extension fields are supported")

    def wants(self, level: int) -> bool:
        return self.levels is None or self.levels[0] <= level <= self.levels[1]

    @property
    def catalog_path(self) -> Path:
        return self.out / CATALOG_NAME


# ---------------------------------------------------------------------------
# files


def atomic_write(path: Path, data: str | bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"encoding": "utf-8", "newline": "\n"})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_catalog(records: list[dict]) -> str:
    records = sorted(records, key=lambda r: (r["level"], r["key"]))
    return json.dumps(records, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def save_catalog(records: list[dict], path: Path) -> None:
    atomic_write(path, dump_catalog(records))


def load_catalog(path: Path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def record_structure(rec: dict) -> IncidenceStructure:
    return make_structure(rec["blocks"])


def encode_points(points: Sequence[Sequence]) -> list[list[str]]:
    return [[format_field(c) for c in p] for p in points]


def decode_points(rows: Sequence[Sequence[str]], d: int | None = None) -> list[tuple]:
    out = []
    for row in rows:
        vals = [parse_field(c) for c in row]
        if d is not None:
            vals = [v if isinstance(v, QuadExt) else QuadExt(v, 0, d) for v in vals]
        out.append(tuple(vals))
    return out


def _triples(ts) -> list[list[int]]:
    return [list(t) for t in ts]


# ---------------------------------------------------------------------------
# stages


def run_enumerate(cfg: RunConfig) -> list[dict]:
    catalog = enumerate_all()
    records = []
    for level in range(1, catalog.m + 1):
        if not cfg.wants(level):
            continue
        for s in catalog.levels[level]:
            records.append(
                {"level": level, "blocks": _triples(s.blocks), "key": canonical_key(s), "aut": automorphism_count(s)}
            )
    save_catalog(records, cfg.catalog_path)
    return sorted(records, key=lambda r: (r["level"], r["key"]))


def verdict_fields(v: RealizabilityVerdict, seed: int) -> dict:
    out: dict = {"verdict": v.kind, "seed": seed}
    if v.witness is not None:
        out["witness"] = encode_points(v.witness.points)
    if v.d is not None:
        out["field_d"] = v.d
    if v.forced:
        out["forced"] = _triples(v.forced)
        out["forced_target_key"] = v.target_key
        out["forced_target_level"] = v.target_level
    if v.kind == "None":
        out["certificate"] = v.certificate
    return out


_REALIZE_FIELDS = ("verdict", "seed", "witness", "field_d", "forced", "forced_target_key", "forced_target_level", "certificate")
_CUBIC_FIELDS = ("cubic_class", "extra", "cubic", "hilbert", "cubic_witness", "cubic_field_d", "reason", "target_key", "target_level")


def run_realize(cfg: RunConfig, records: list[dict]) -> list[dict]:
    for rec in records:
        if not cfg.wants(rec["level"]):
            continue
        for k in _REALIZE_FIELDS + _CUBIC_FIELDS:
            rec.pop(k, None)
        s = record_structure(rec)
        try:
            v = classify_realizability(s, heights=cfg.heights, seed=cfg.seed)
            rec.update(verdict_fields(v, cfg.seed))
        except InconclusiveError as exc:
            log.warning("%s: %s", rec["key"], exc)
            rec.update({"verdict": "Inconclusive", "seed": cfg.seed})
    save_catalog(records, cfg.catalog_path)
    return records


def _stored_verdict(rec: dict) -> RealizabilityVerdict:
    kind = rec.get("verdict")
    if kind is None:
        raise ValueError(f"record {rec['key']} has no realizability verdict; run 'realize' first")
    forced = [tuple(t) for t in rec.get("forced", [])]
    return RealizabilityVerdict(kind, d=rec.get("field_d"), forced=forced, target_key=rec.get("forced_target_key"),
                                target_level=rec.get("forced_target_level"))


def run_cubic(cfg: RunConfig, records: list[dict]) -> list[dict]:
    for rec in records:
        if not cfg.wants(rec["level"]):
            continue
        for k in _CUBIC_FIELDS:
            rec.pop(k, None)
        v = _stored_verdict(rec)
        if v.kind == "Inconclusive":
            rec["cubic_class"] = "Inconclusive"
            continue
        if v.kind == "None":
            rec.update({"cubic_class": "C", "reason": "not realizable in the plane"})
            continue
        s = record_structure(rec)
        try:
            c = classify_on_cubic(s, v, seed=cfg.seed, heights=cfg.heights)
        except InconclusiveError as exc:
            log.warning("%s: %s", rec["key"], exc)
            rec["cubic_class"] = "Inconclusive"
            continue
        rec["cubic_class"] = c.kind
        if c.reason:
            rec["reason"] = c.reason
        if c.kind == "A":
            rec["cubic_witness"] = encode_points(c.witness.points)
            if c.witness.d is not None:
                rec["cubic_field_d"] = c.witness.d
            rec["cubic"] = [format_field(x) for x in c.cubic.coeffs]
            rec["hilbert"] = list(hilbert_profile(c.witness.points))
        elif c.kind == "B":
            rec["extra"] = _triples(c.extra)
            rec["target_key"] = c.target_key
            rec["target_level"] = c.target_level
    save_catalog(records, cfg.catalog_path)
    return records


def run_hilbert(cfg: RunConfig, records: list[dict]) -> list[dict]:
    """Recompute the Hilbert profile of every on-cubic record from its witness."""
    for rec in records:
        if cfg.wants(rec["level"]) and rec.get("cubic_class") == "A":
            pts = decode_points(rec["cubic_witness"], rec.get("cubic_field_d"))
            rec["hilbert"] = list(hilbert_profile(pts))
    save_catalog(records, cfg.catalog_path)
    return records


# ---------------------------------------------------------------------------
# table


@dataclass
class ReportTable:
    structures: list[int]
    realizable: list[int]
    on_cubic: list[int]
    # (row name, level) -> {d: number of classes needing Q[sqrt d]}
    extensions: dict[tuple[str, int], dict[int, int]] = field(default_factory=dict)

    def check_monotone(self) -> None:
        for lvl, (a, b, c) in enumerate(zip(self.structures, self.realizable, self.on_cubic), start=1):
            if not a >= b >= c:
                raise ValueError(f"level {lvl}: counts {a}, {b}, {c} are not decreasing")

    def fields(self) -> list[int]:
        """Extension discriminants in order of first appearance."""
        seen: list[int] = []
        for (_, _), ds in sorted(self.extensions.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            for d in sorted(ds, reverse=True):
                if d not in seen:
                    seen.append(d)
        return seen

    def note(self, level: int) -> str:
        parts = []
        for row in ("realizable", "on_cubic"):
            for d, n in sorted(self.extensions.get((row, level), {}).items(), reverse=True):
                parts.append(f"{row}: {n} over {_field_name(d)}")
        return "; ".join(parts)

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "structures", "realizable", "on_cubic", "field_note"])
        for i in range(MAX_LEVEL):
            w.writerow([i + 1, self.structures[i], self.realizable[i], self.on_cubic[i], self.note(i + 1)])
        return buf.getvalue()

    def text(self) -> str:
        marks = {d: "*" * (k + 1) for k, d in enumerate(self.fields())}
        rows = [
            ("Level", None, list(range(1, MAX_LEVEL + 1))),
            ("# structures", None, self.structures),
            ("# realizable", "realizable", self.realizable),
            ("# on a cubic", "on_cubic", self.on_cubic),
        ]
        width = max(len(r[0]) for r in rows)
        lines = []
        for name, row, vals in rows:
            cells = []
            for lvl, v in enumerate(vals, start=1):
                ds = self.extensions.get((row, lvl), {}) if row else {}
                cell = str(v) + "".join(marks[d] for d in sorted(ds, key=self.fields().index))
                cells.append(f"{cell:>6}")
            lines.append(f"{name:<{width}} " + "".join(cells))
        for d, m in marks.items():
            lines.append(f"{m} one class in the cell needs the field {_field_name(d)}")
        return "\n".join(lines) + "\n"


def _field_name(d: int) -> str:
    return f"Q[sqrt({d})]"


def emit_table(records: list[dict]) -> ReportTable:
    n = MAX_LEVEL
    structures, realizable, on_cubic = [0] * n, [0] * n, [0] * n
    ext: dict[tuple[str, int], dict[int, int]] = {}

    def bump(row: str, level: int, d: int) -> None:
        cell = ext.setdefault((row, level), {})
        cell[d] = cell.get(d, 0) + 1

    for rec in records:
        i = rec["level"] - 1
        structures[i] += 1
        if rec.get("verdict") in ("Q", "QuadExt"):
            realizable[i] += 1
            if rec["verdict"] == "QuadExt":
                bump("realizable", i + 1, rec["field_d"])
        if rec.get("cubic_class") == "A":
            on_cubic[i] += 1
            if rec.get("cubic_field_d") is not None:
                bump("on_cubic", i + 1, rec["cubic_field_d"])
    table = ReportTable(structures, realizable, on_cubic, ext)
    table.check_monotone()
    return table


def write_table(cfg: RunConfig, table: ReportTable) -> list[Path]:
    paths = [cfg.out / "table.csv", cfg.out / "table.txt", cfg.out / "table.svg"]
    atomic_write(paths[0], table.csv())
    atomic_write(paths[1], table.text())
    atomic_write(paths[2], chart_svg(table))
    return paths


# ---------------------------------------------------------------------------
# figures


def _matplotlib():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "ninepoints"
    matplotlib.rcParams["font.family"] = "sans-serif"
    return plt


def _svg_bytes(fig) -> str:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    return buf.getvalue()


def chart_svg(table: ReportTable) -> str:
    plt = _matplotlib()
    fig, ax = plt.subplots(figsize=(8, 4.5))
    levels = list(range(1, MAX_LEVEL + 1))
    w = 0.27
    for k, (name, vals) in enumerate(
        (("structures", table.structures), ("realizable", table.realizable), ("on a cubic", table.on_cubic))
    ):
        ax.bar([lvl + (k - 1) * w for lvl in levels], vals, width=w, label=name)
    ax.set_xticks(levels)
    ax.set_xlabel("level (number of collinear triples)")
    ax.set_ylabel("classes")
    ax.legend()
    fig.tight_layout()
    out = _svg_bytes(fig)
    plt.close(fig)
    return out


def _real_value(c, d: int | None) -> tuple[float, bool]:
    if isinstance(c, QuadExt) and c.b != 0:
        if c.d > 0:
            return float(c.a) + float(c.b) * c.d**0.5, False
        # no real embedding: stand in an irrational for sqrt(d)
        return float(c.a) + float(c.b) * SCHEMATIC_ROOT, True
    return float(c.a if isinstance(c, QuadExt) else c), False


def _chart(points) -> list[tuple[float, float]]:
    """Affine coordinates after a fixed projective change keeping every point finite."""
    cands = [(0, 0, 1), (1, 1, 1), (1, 2, 3), (2, -1, 5), (3, 5, -2)]
    for lx, ly, lz in cands:
        dens = [lx * p[0] + ly * p[1] + lz * p[2] for p in points]
        if all(abs(v) > 1e-9 for v in dens):
            return [(p[0] / v, p[1] / v) for p, v in zip(points, dens)]
    raise ValueError("no affine chart found")


def render_svg(rec: dict, path: Path | None = None, which: str = "witness") -> str:
    """Draw a record's witness: nine labelled points and one segment per block."""
    key = "cubic_witness" if which == "cubic" else "witness"
    rows = rec.get(key) or rec.get("witness") or rec.get("cubic_witness")
    if not rows:
        raise ValueError(f"record {rec['key']} has no witness")
    pts = decode_points(rows)
    schematic = False
    real = []
    for p in pts:
        coords = []
        for c in p:
            v, flag = _real_value(c, None)
            schematic |= flag
            coords.append(v)
        real.append(coords)
    xy = _chart(real)
    xs = [p[0] for p in xy]
    ys = [p[1] for p in xy]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    cx, cy = (max(xs) + min(xs)) / 2, (max(ys) + min(ys)) / 2

    plt = _matplotlib()
    fig = plt.figure(figsize=(600 / 72, 600 / 72), dpi=72)
    ax = fig.add_axes((0, 0, 1, 1))
    ax.set_xlim(cx - 0.6 * span, cx + 0.6 * span)
    ax.set_ylim(cy - 0.6 * span, cy + 0.6 * span)
    ax.set_aspect("equal")
    ax.axis("off")
    for b in rec["blocks"]:
        seg = max(((i, j) for i in b for j in b if i < j),
                  key=lambda ij: (xy[ij[0]][0] - xy[ij[1]][0]) ** 2 + (xy[ij[0]][1] - xy[ij[1]][1]) ** 2)
        ax.plot([xy[seg[0]][0], xy[seg[1]][0]], [xy[seg[0]][1], xy[seg[1]][1]], color="#4a6fa5", linewidth=2)
    for i, (x, y) in enumerate(xy):
        ax.plot([x], [y], "o", color="#202020", markersize=10)
        ax.annotate(str(i), (x, y), xytext=(7, 7), textcoords="offset points", fontsize=13, family="sans-serif")
    title = f"level {rec['level']}: {rec['key']}"
    if schematic:
        title += " (schematic)"
    ax.text(0.02, 0.98, title, transform=ax.transAxes, va="top", fontsize=10, family="sans-serif")
    svg = _svg_bytes(fig)
    plt.close(fig)
    if path is not None:
        atomic_write(path, svg)
    return svg


def figure_name(rec: dict) -> str:
    return f"level{rec['level']:02d}_{rec['key'].replace(',', '-')}.svg"


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerifyReport:
    failures: list[str] = field(default_factory=list)
    inconclusive: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def exit_code(self) -> int:
        if self.failures:
            return EXIT_VERIFY
        if self.inconclusive:
            return EXIT_INCONCLUSIVE
        return EXIT_OK


def _check_record(rec: dict, keys_by_level: dict[int, set], fail) -> None:
    key = rec.get("key", "?")
    try:
        s = record_structure(rec)
    except (ValueError, KeyError) as exc:
        fail(f"{key}: invalid blocks ({exc})")
        return
    if canonical_key(s) != key:
        fail(f"{key}: canonical key mismatch")
    if s.level != rec.get("level"):
        fail(f"{key}: level mismatch")
    if "aut" in rec and automorphism_count(s) != rec["aut"]:
        fail(f"{key}: automorphism count mismatch")

    verdict = rec.get("verdict")
    if verdict in ("Q", "QuadExt"):
        d = rec.get("field_d")
        if (verdict == "Q") != (d is None):
            fail(f"{key}: field descriptor inconsistent with verdict")
        try:
            pts = decode_points(rec["witness"])
        except (KeyError, ValueError, ZeroDivisionError) as exc:
            fail(f"{key}: unreadable witness ({exc})")
        else:
            if not verify_witness(Witness(pts, s), s):
                fail(f"{key}: witness does not realize the structure")
            if verdict == "QuadExt" and all(not isinstance(c, QuadExt) for p in pts for c in p):
                fail(f"{key}: extension verdict with a rational witness")
    elif verdict == "Forces":
        forced = [tuple(t) for t in rec.get("forced", [])]
        if not forced or not all(compatible(s, t) for t in forced):
            fail(f"{key}: forced triples missing or incompatible")
        else:
            target = make_structure(list(s.blocks) + forced)
            if canonical_key(target) != rec.get("forced_target_key"):
                fail(f"{key}: forced target key mismatch")
    elif verdict == "None":
        t, _ = framed(s)
        p = parametrize(t)
        if not saturate_degeneracies(alignment_ideal(p, t), p, t).is_unit():
            fail(f"{key}: non-realizability certificate does not reproduce")
    elif verdict == "Inconclusive":
        return
    elif verdict is not None:
        fail(f"{key}: unknown verdict {verdict!r}")

    cls = rec.get("cubic_class")
    if cls == "A":
        try:
            pts = decode_points(rec["cubic_witness"])
            cubic = CubicForm(tuple(parse_field(c) for c in rec["cubic"]))
        except (KeyError, ValueError, ZeroDivisionError) as exc:
            fail(f"{key}: unreadable cubic certificate ({exc})")
            return
        if not verify_witness(Witness(pts, s), s):
            fail(f"{key}: cubic witness does not realize the structure")
        if any(cubic(p) for p in pts):
            fail(f"{key}: witness not on the stored cubic")
        if not is_irreducible(cubic):
            fail(f"{key}: stored cubic is reducible")
        try:
            if list(hilbert_profile(pts)) != rec.get("hilbert"):
                fail(f"{key}: Hilbert profile mismatch")
        except DegenerateInputError as exc:
            fail(f"{key}: {exc}")
    elif cls == "B":
        extra = [tuple(t) for t in rec.get("extra", [])]
        try:
            target = make_structure(list(s.blocks) + extra)
        except ValueError:
            fail(f"{key}: cubic-forced triples clash with the blocks")
            return
        if canonical_key(target) != rec.get("target_key"):
            fail(f"{key}: cubic target key mismatch")
        present = keys_by_level.get(target.level)
        if present is not None and canonical_key(target) not in present:
            fail(f"{key}: cubic target missing from level {target.level}")


def verify_all(records: list[dict]) -> VerifyReport:
    report = VerifyReport()
    keys_by_level: dict[int, set] = {}
    for rec in records:
        keys_by_level.setdefault(rec.get("level"), set()).add(rec.get("key"))
    for rec in records:
        report.checked += 1
        if rec.get("verdict") == "Inconclusive" or rec.get("cubic_class") == "Inconclusive":
            report.inconclusive.append(rec["key"])
        _check_record(rec, keys_by_level, lambda msg: report.failures.append(msg))

    counts = {"structures": [0] * MAX_LEVEL, "realizable": [0] * MAX_LEVEL, "on_cubic": [0] * MAX_LEVEL}
    for rec in records:
        i = rec["level"] - 1
        counts["structures"][i] += 1
        counts["realizable"][i] += rec.get("verdict") in ("Q", "QuadExt")
        counts["on_cubic"][i] += rec.get("cubic_class") == "A"
    expected = {"structures": goldens.STRUCTURES, "realizable": goldens.REALIZABLE, "on_cubic": goldens.ON_CUBIC}
    for row, want in expected.items():
        got = counts[row]
        for lvl, (a, b) in enumerate(zip(got, want), start=1):
            if a != b:
                report.failures.append(f"count mismatch: {row} at level {lvl} is {a}, expected {b}")
    return report


def run_all(cfg: RunConfig) -> tuple[list[dict], ReportTable]:
    records = run_enumerate(cfg)
    records = run_realize(cfg, records)
    records = run_cubic(cfg, records)
    table = emit_table(records)
    write_table(cfg, table)
    return records, table
