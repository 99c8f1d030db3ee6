"""Command line entry point: ``ninepoints <stage> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import pipeline
from .realization import DEFAULT_HEIGHTS


def _levels(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi if sep else lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if not 1 <= a <= b <= 12:
        raise argparse.ArgumentTypeError("levels must satisfy 1 <= A <= B <= 12")
    return a, b


def _heights(text: str) -> tuple[int, ...]:
    try:
        hs = tuple(int(h) for h in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not hs or list(hs) != sorted(set(hs)) or hs[0] < 1:
        raise argparse.ArgumentTypeError("heights must be positive and strictly increasing")
    return hs


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory (default: out)")
    common.add_argument("--seed", type=int, default=0, help="random seed for witness search (default: 0)")
    common.add_argument("--heights", type=_heights, default=DEFAULT_HEIGHTS,
                        help="witness height schedule, e.g. 1,2,3,5,8,13")
    common.add_argument("--levels", type=_levels, default=None, help="restrict to levels A..B")
    common.add_argument("--record", default=None, help="canonical key of a single record")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="ninepoints",
        description="Classify configurations of nine points with at most triple collinearities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "enumerate": "enumerate isomorphism classes and write the catalog",
        "realize": "decide plane realizability for each catalog record",
        "cubic": "classify realizable records on irreducible cubics",
        "hilbert": "recompute Hilbert profiles of on-cubic witnesses",
        "table": "write the summary table (CSV, text, chart)",
        "render": "draw witnesses as SVG figures",
        "verify": "re-check every certificate and the expected counts",
        "all": "enumerate, realize, cubic and table in one go",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def _select(records: list[dict], key: str | None) -> list[dict]:
    if key is None:
        return records
    hits = [r for r in records if r["key"] == key]
    if not hits:
        raise KeyError(f"no record with key {key!r}")
    return hits


def _status(records: list[dict]) -> int:
    bad = [r["key"] for r in records if "Inconclusive" in (r.get("verdict"), r.get("cubic_class"))]
    for key in bad:
        print(f"inconclusive: {key}", file=sys.stderr)
    return pipeline.EXIT_INCONCLUSIVE if bad else pipeline.EXIT_OK


def run(args: argparse.Namespace) -> int:
    cfg = pipeline.RunConfig(seed=args.seed, heights=args.heights, out=args.out, levels=args.levels)
    cmd = args.command
    if cmd == "enumerate":
        records = pipeline.run_enumerate(cfg)
        print(f"{len(records)} records written to {cfg.catalog_path}")
        return pipeline.EXIT_OK
    if cmd == "all":
        records, table = pipeline.run_all(cfg)
        print(table.text(), end="")
        return _status(records)

    records = pipeline.load_catalog(cfg.catalog_path)
    if cmd == "realize":
        records = pipeline.run_realize(cfg, records)
        return _status(records)
    if cmd == "cubic":
        records = pipeline.run_cubic(cfg, records)
        return _status(records)
    if cmd == "hilbert":
        records = pipeline.run_hilbert(cfg, records)
        for rec in _select(records, args.record):
            if "hilbert" in rec and cfg.wants(rec["level"]):
                print(f"{rec['key']}\t{json.dumps(rec['hilbert'])}")
        return pipeline.EXIT_OK
    if cmd == "table":
        table = pipeline.emit_table(records)
        for path in pipeline.write_table(cfg, table):
            print(f"wrote {path}", file=sys.stderr)
        print(table.text(), end="")
        return pipeline.EXIT_OK
    if cmd == "render":
        count = 0
        for rec in _select(records, args.record):
            if not cfg.wants(rec["level"]) or not (rec.get("witness") or rec.get("cubic_witness")):
                continue
            path = cfg.out / "figures" / pipeline.figure_name(rec)
            pipeline.render_svg(rec, path)
            count += 1
        print(f"{count} figures written to {cfg.out / 'figures'}")
        return pipeline.EXIT_OK
    if cmd == "verify":
        report = pipeline.verify_all(_select(records, args.record) if args.record else records)
        for line in report.failures:
            print(f"FAIL {line}")
        for key in report.inconclusive:
            print(f"INCONCLUSIVE {key}")
        print(f"{report.checked} records checked, {len(report.failures)} failures")
        return report.exit_code
    raise AssertionError(cmd)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return run(args)
    except OSError as exc:
        where = getattr(exc, "filename", None)
        print(f"I/O error{f' ({where})' if where else ''}: {exc.strerror or exc}", file=sys.stderr)
        return pipeline.EXIT_IO
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return pipeline.EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
