import copy
import json

import pytest

from ninepoints import canonical_key, cli, goldens, pipeline, structure
from ninepoints.algebra import QuadExt
from ninepoints.pipeline import RunConfig, decode_points, encode_points, verify_all
from ninepoints.realization import InconclusiveError


def key_of(text):
    return canonical_key(structure(text))


def run_cli(*args):
    return cli.main([str(a) for a in args])


def test_enumerate_low_levels(tmp_path):
    assert run_cli("enumerate", "--out", tmp_path, "--levels", "1..3") == 0
    first = (tmp_path / "catalog.json").read_bytes()
    records = json.loads(first)
    assert [r["level"] for r in records] == [1, 2, 2, 3, 3, 3, 3, 3]
    assert {r["key"] for r in records if r["level"] == 2} == {key_of(t) for t in goldens.LEVEL_2}
    assert run_cli("enumerate", "--out", tmp_path, "--levels", "1..3") == 0
    assert (tmp_path / "catalog.json").read_bytes() == first


def test_stages_rerun_identically(tmp_path):
    outputs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        for stage in ("enumerate", "realize", "cubic", "render"):
            assert run_cli(stage, "--out", out, "--levels", "1..5") == 0
        outputs.append({p.relative_to(out): p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()})
    assert outputs[0] == outputs[1]
    assert any(str(p).startswith("figures") for p in outputs[0])


def test_point_encoding_round_trip():
    w = QuadExt(1, 2, -3)
    pts = [(1, 0, 2), (w, 0, 1)]
    assert decode_points(encode_points(pts)) == [(1, 0, 2), (w, 0, 1)]


def test_table_files(pipeline_run):
    cfg, records, table = pipeline_run
    csv_text = (cfg.out / "table.csv").read_text()
    assert csv_text.splitlines()[0] == "level,structures,realizable,on_cubic,field_note"
    assert csv_text.splitlines()[8].startswith("8,31,29,22,")
    txt = (cfg.out / "table.txt").read_text()
    assert "Q[sqrt(-3)]" in txt and "Q[sqrt(-1)]" in txt
    svg = (cfg.out / "table.svg").read_text()
    assert svg.lstrip().startswith("<?xml") and "</svg>" in svg


def test_table_rejects_non_monotone_counts():
    with pytest.raises(ValueError):
        pipeline.ReportTable([1] * 12, [2] * 12, [0] * 12).check_monotone()


def test_render_svg(pipeline_run):
    _, records, _ = pipeline_run
    rec = next(r for r in records if r["key"] == key_of(goldens.MOEBIUS_KANTOR))
    svg = pipeline.render_svg(rec)
    assert 'viewBox="0 0 600 600"' in svg
    assert "(schematic)" in svg
    assert svg == pipeline.render_svg(rec)
    with pytest.raises(ValueError):
        pipeline.render_svg({"key": "x", "level": 1, "blocks": [[0, 1, 2]]})


def test_verify_pristine(pipeline_run):
    _, records, _ = pipeline_run
    report = verify_all(records)
    assert report.failures == [] and report.inconclusive == []
    assert report.exit_code == 0 and report.checked == 162


def test_verify_corrupted_witness(pipeline_run):
    _, records, _ = pipeline_run
    bad = copy.deepcopy(records)
    rec = next(r for r in bad if r["verdict"] == "Q" and r["level"] == 6)
    rec["witness"][7] = list(rec["witness"][8])
    report = verify_all(bad)
    assert report.exit_code == 1
    assert any(rec["key"] in line for line in report.failures)


def test_verify_missing_level(pipeline_run):
    _, records, _ = pipeline_run
    report = verify_all([r for r in records if r["level"] != 12])
    assert any("level 12" in line for line in report.failures)


def test_verify_reports_inconclusive(pipeline_run):
    _, records, _ = pipeline_run
    marked = copy.deepcopy(records)
    marked[5]["verdict"] = "Inconclusive"
    report = verify_all(marked)
    assert report.inconclusive == [marked[5]["key"]]


def test_cli_verify_exit_codes(pipeline_run, tmp_path, capsys):
    cfg, records, _ = pipeline_run
    assert run_cli("verify", "--out", cfg.out) == 0
    broken = copy.deepcopy(records)
    rec = next(r for r in broken if r.get("cubic_class") == "A" and r["level"] == 7)
    rec["hilbert"] = [1, 3, 6, 8, 9] if rec["hilbert"] == [1, 3, 6, 9] else [1, 3, 6, 9]
    pipeline.save_catalog(broken, tmp_path / "catalog.json")
    assert run_cli("verify", "--out", tmp_path) == 1
    assert f"FAIL {rec['key']}: Hilbert profile mismatch" in capsys.readouterr().out


def test_cli_inconclusive_exit(tmp_path, monkeypatch):
    assert run_cli("enumerate", "--out", tmp_path, "--levels", "1..2") == 0

    def give_up(*args, **kwargs):
        raise InconclusiveError("no witness within the height bound")

    monkeypatch.setattr(pipeline, "classify_realizability", give_up)
    assert run_cli("realize", "--out", tmp_path) == 2
    records = json.loads((tmp_path / "catalog.json").read_text())
    assert {r["verdict"] for r in records} == {"Inconclusive"}


def test_cli_io_errors(tmp_path):
    assert run_cli("table", "--out", tmp_path / "missing") == 3
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run_cli("enumerate", "--out", blocker, "--levels", "1..1") == 3


def test_cli_bad_record(pipeline_run):
    cfg, _, _ = pipeline_run
    assert run_cli("render", "--out", cfg.out, "--record", "not-a-key") == 1


def test_cli_argument_errors():
    with pytest.raises(SystemExit):
        run_cli("enumerate", "--levels", "5..2")
    with pytest.raises(SystemExit):
        run_cli("realize", "--heights", "3,2")


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(heights=())
    with pytest.raises(ValueError):
        RunConfig(quadratic_only=False)
