import hashlib
import json
import re
from pathlib import Path

import pytest

from qassess import cli, data_path
from qassess.model import (
    EvalChild, Evaluation, Entity, Factor, Impact, Instrument, Measure, ModuleDef, UtilityFunction,
)
from qassess.modelformat import load_modules, save_module

DEMO = str(data_path("demo"))
BUNDLES = data_path("bundles")
BASELINE = data_path("baseline")
RELEASE_GRADES = [("1.9.0", 4.15), ("2.0.0", 3.34), ("2.0.1", 3.63), ("2.0.2", 3.42), ("2.1.0", 3.27), ("2.2.1", 3.17)]


def digest(directory) -> dict:
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(Path(directory).rglob("*")) if p.is_file()}


def test_validate_demo(capsys):
    assert cli.run(["validate", DEMO]) == 0
    assert "0 error(s), 0 warning(s)" in capsys.readouterr().out


def test_validate_broken_exits_1(capsys):
    broken = Path(__file__).parent / "data" / "broken" / "weight-sum"
    assert cli.run(["validate", str(broken)]) == 1
    assert "weight-sum" in capsys.readouterr().err


@pytest.mark.parametrize("case", ["syntax", "schema"])
def test_validate_unparseable_exits_2(case, capsys):
    assert cli.run(["validate", str(Path(__file__).parent / "data" / "broken" / case)]) == 2
    assert case in capsys.readouterr().err


def test_missing_input_exits_2(tmp_path, capsys):
    assert cli.run(["validate", str(tmp_path / "nope.qm.json")]) == 2
    assert "no such file" in capsys.readouterr().err


def test_usage_error_exits_2(capsys):
    assert cli.run(["frobnicate"]) == 2
    assert cli.run([]) == 2


def test_invariant_breach_exits_3(tmp_path, monkeypatch):
    from qassess.assessment import InvariantError

    def boom(*_):
        raise InvariantError("boom")
    monkeypatch.setattr(cli, "assess", boom)
    args = ["assess", DEMO, "--bundle", str(BUNDLES / "java6-reference.json"), "--out", str(tmp_path)]
    assert cli.run(args) == 3


def test_assess_matches_golden_and_is_repeatable(tmp_path):
    golden = (Path(__file__).parent / "golden" / "java6-reference.report.json").read_text()
    outs = []
    for run in ("a", "b"):
        out = tmp_path / run
        assert cli.run(["assess", DEMO, "--bundle", str(BUNDLES / "java6-reference.json"), "--out", str(out)]) == 0
        outs.append((out / "report.json").read_text())
        assert (out / "report.html").read_text().startswith("<!DOCTYPE html>")
    strip = lambda s: re.sub(r'"timestamp": "[^"]*"', "", s)
    assert strip(outs[0]) == strip(outs[1]) == strip(golden)


def test_assess_with_manual_csv(tmp_path, capsys):
    out = tmp_path / "r"
    args = ["assess", DEMO, "--bundle", str(BUNDLES / "java6-tools-only.json"),
            "--manual", str(BUNDLES / "java6-manual.csv"), "--out", str(out), "--timestamp", "2000-01-01T00:00:00Z"]
    assert cli.run(args) == 0
    golden = (Path(__file__).parent / "golden" / "java6-reference.report.json").read_text()
    assert (out / "report.json").read_text() == golden
    assert "grade 2 (2.74)" in capsys.readouterr().out


def test_assess_tools_only_is_wider(tmp_path):
    assert cli.run(["assess", DEMO, "--bundle", str(BUNDLES / "java6-tools-only.json"), "--out", str(tmp_path)]) == 0
    root = json.loads((tmp_path / "report.json").read_text())["factors"]["root.Quality"]
    assert root["utility"]["lo"] < 0.6518 < root["utility"]["hi"]


def test_assess_multiple_bundles(tmp_path):
    args = ["assess", DEMO, "--bundle", str(BUNDLES / "java6-reference.json"),
            "--bundle", str(BUNDLES / "java6-tools-only.json"), "--out", str(tmp_path)]
    assert cli.run(args) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["java6-reference", "java6-tools-only"]


def test_calibrate_writes_new_revision(tmp_path, capsys):
    before = digest(DEMO)
    out = tmp_path / "cal"
    assert cli.run(["calibrate", DEMO, "--baseline", str(BASELINE / "java-baseline.csv"), "--out", str(out)]) == 0
    assert digest(DEMO) == before
    assert {p.name for p in out.iterdir()} == {"root.qm.json", "object-oriented.qm.json", "java.qm.json",
                                               "calibration-report.json"}
    report = json.loads((out / "calibration-report.json").read_text())
    rows = {r["measureId"]: r for r in report["measures"]}
    assert report["iqrBasis"] == "nonzero"
    ev = {e["factor"]: e for e in json.loads((out / "java.qm.json").read_text())["module"]["evaluations"]}
    child = next(c for c in ev["java.GeneralExpressionApplicability"]["children"] if c["ref"] == "java.DoomedTestDensity")
    assert (child["utility"]["min"], child["utility"]["max"]) == (rows["java.DoomedTestDensity"]["min"],
                                                                   rows["java.DoomedTestDensity"]["max"])
    # the revision is itself a valid model
    assert cli.run(["validate", str(out / "root.qm.json"), str(out / "object-oriented.qm.json"),
                    str(out / "java.qm.json")]) == 0


def test_calibrate_unknown_column(tmp_path):
    csv = tmp_path / "b.csv"
    csv.write_text("system,root.Nope\n" + "".join(f"s{i},{i}\n" for i in range(10)))
    assert cli.run(["calibrate", DEMO, "--baseline", str(csv), "--out", str(tmp_path / "o")]) == 1


def test_calibrate_too_few_systems(tmp_path):
    csv = tmp_path / "b.csv"
    csv.write_text("system,java.DoomedTestDensity\n" + "".join(f"s{i},{i}\n" for i in range(5)))
    assert cli.run(["calibrate", DEMO, "--baseline", str(csv), "--out", str(tmp_path / "o")]) == 1


def test_calibrate_rejects_jump_on_increasing(tmp_path, capsys):
    csv = tmp_path / "b.csv"
    csv.write_text("system,root.CloneCoverage\n" + "".join(f"s{i},{1 if i < 2 else 0}\n" for i in range(10)))
    assert cli.run(["calibrate", DEMO, "--baseline", str(csv), "--out", str(tmp_path / "o")]) == 1
    assert "jump-increasing" in capsys.readouterr().err


def test_weigh(tmp_path, capsys):
    before = digest(DEMO)
    out = tmp_path / "w"
    assert cli.run(["weigh", DEMO, "--ranking", str(BASELINE / "demo-ranking.csv"), "--out", str(out)]) == 0
    assert digest(DEMO) == before
    ev = {e["factor"]: e for e in json.loads((out / "root.qm.json").read_text())["module"]["evaluations"]}
    w = {c["ref"]: c["weight"] for c in ev["root.Quality"]["children"]}
    assert w["root.Maintainability"] == pytest.approx(11 / 18)
    assert w["root.FunctionalSuitability"] == w["root.Reliability"] == pytest.approx(7 / 36)
    assert "root.Quality\troot.Maintainability\t0.611111" in capsys.readouterr().out


def test_weigh_rejects_incomplete_ranking(tmp_path):
    csv = tmp_path / "r.csv"
    csv.write_text("parentId,childId,rank\nroot.Quality,root.Maintainability,1\n")
    assert cli.run(["weigh", DEMO, "--ranking", str(csv), "--out", str(tmp_path / "w")]) == 1


def _one_measure_model(directory: Path):
    """Root aspect fed by one product factor whose utility equals the measured value."""
    m = ModuleDef(
        "root",
        entities=[Entity("root.P", "Product")],
        factors=[Factor("root.Quality", "Quality", "QualityAspect", "root.P"),
                 Factor("root.Score", "Score", "ProductFactor", "root.P")],
        impacts=[Impact("root.Score", "root.Quality", "positive")],
        measures=[Measure("root.ScoreValue", "Score value", "base-size", factors=["root.Score"])],
        instruments=[Instrument("root.ScoreInput", "root.ScoreValue", "manual")],
        evaluations=[Evaluation("root.Score", [EvalChild("root.ScoreValue", "measure", 1.0,
                                                         UtilityFunction("increasing", 0.0, 1.0))]),
                     Evaluation("root.Quality", [EvalChild("root.Score", "factor", 1.0)])],
    )
    directory.mkdir()
    return save_module(m, directory)


@pytest.fixture
def release_reports(tmp_path):
    model = _one_measure_model(tmp_path / "model")
    dirs = []
    for version, grade in RELEASE_GRADES:
        bundle = tmp_path / f"{version}.json"
        bundle.write_text(json.dumps({"system": {"name": "automation", "version": version},
                                      "values": {"root.ScoreInput": (6 - grade) / 5}}))
        out = tmp_path / "reports" / version
        assert cli.run(["assess", str(model), "--bundle", str(bundle), "--out", str(out)]) == 0
        dirs.append(str(out))
    return dirs


def test_compare_release_series(release_reports, capsys):
    capsys.readouterr()
    assert cli.run(["compare", "--reports", *release_reports, "--since", "2.0.1"]) == 0
    out = capsys.readouterr().out
    m = re.search(r"improvement 2\.0\.1 -> 2\.2\.1: ([\d.]+)% \(grades strictly decreasing from 2\.0\.1\)", out)
    assert m and float(m.group(1)) == pytest.approx(12.67, abs=0.05)
    lines = out.splitlines()
    assert lines[0].split("\t") == ["system", "version", "grade", "changeVsPrevious%"]
    assert [l.split("\t")[2] for l in lines[1:7]] == [f"{g:.2f}" for _, g in RELEASE_GRADES]


def test_compare_whole_series_not_monotone(release_reports, capsys):
    capsys.readouterr()
    assert cli.run(["compare", "--reports", *release_reports]) == 0
    assert "not monotone from 1.9.0" in capsys.readouterr().out


def test_compare_unknown_since(release_reports):
    assert cli.run(["compare", "--reports", *release_reports, "--since", "9.9"]) == 2


def test_rank_correlate(tmp_path, capsys):
    csv = tmp_path / "t1.csv"
    csv.write_text("item,rankA,rankB\nA,1,1\nB,2,3\nC,2,2\nD,4,4\nE,5,5\n")
    assert cli.run(["rank-correlate", str(csv)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("r=0.9747") and "n=5" in out and "exact-permutation" in out


def test_rank_correlate_bad_header(tmp_path):
    csv = tmp_path / "x.csv"
    csv.write_text("a,b,c\n1,2,3\n")
    assert cli.run(["rank-correlate", str(csv)]) == 2
