import csv
import json
import math
from pathlib import Path

import pytest

from fracbed import cli
from fracbed.cli import ManifestError, SUMMARY_HEADER, exit_code, main, parse_manifest
from fracbed.params import Params
from fracbed.report import InequalityReport
from fracbed.specfun import CONSTANT_NAMES

ROOT = Path(__file__).resolve().parents[1]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- constants ---

def test_constants_text_example(capsys):
    code, out, _ = run(capsys, "constants", "--n", "1", "--beta", "0.5", "--which", "Dbeta",
                       "--format", "text")
    assert code == 0
    assert out.startswith("D_beta = 39.478417")
    assert float(out.split()[2]) == pytest.approx(4 * math.pi ** 2, rel=1e-14)


def test_constants_beta_out_of_range(capsys):
    code, _, err = run(capsys, "constants", "--n", "1", "--beta", "1.2", "--which", "Dbeta")
    assert code == 3 and "beta in (0,1)" in err
    code, _, err = run(capsys, "constants", "--n", "1", "--beta", "1.2", "--which", "all")
    assert code == 3


def test_constants_all_json(capsys):
    code, out, _ = run(capsys, "constants", "--n", "3", "--beta", "0.25", "--alpha", "0.5",
                       "--p", "1.5", "--which", "all", "--format", "json")
    body = json.loads(out)
    assert code == 0 and set(body) == set(CONSTANT_NAMES)
    for v in body.values():
        assert {"formulaId", "params", "value", "logValue"} <= set(v)
        assert math.log(v["value"]) == pytest.approx(v["logValue"], abs=1e-12)


def test_constants_single_inadmissible(capsys):
    # the uncertainty constant needs alpha > 0
    code, _, err = run(capsys, "constants", "--n", "1", "--beta", "0.5", "--which", "pitt")
    assert code == 3 and "alpha" in err


def test_constants_csv(capsys):
    code, out, _ = run(capsys, "constants", "--n", "2", "--beta", "0.5", "--which", "bbm",
                       "--format", "csv")
    rows = list(csv.reader(out.splitlines()))
    assert code == 0 and rows[0][0] == "name" and rows[1][0] == "bbm" and len(rows) == 2


def test_bad_flags_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["constants", "--n", "1"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["verify", "--theorem", "T10", "--n", "1"])
    assert e.value.code == 2


# --- verify ---

def test_exit_code_contract():
    assert [exit_code(v) for v in ("holds", "holds-within-error", "violated", "divergent")] \
        == [0, 0, 1, 4]


def test_verify_inadmissible(capsys):
    code, _, err = run(capsys, "verify", "--theorem", "T1", "--n", "1", "--p", "2",
                       "--alpha", "0.6", "--beta", "0.5")
    assert code == 3 and "p < n/(alpha+beta)" in err


def test_verify_thm2_hls_example(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("FRACBED_TIER", "quick")
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "--theorem", "T2", "--n", "3", "--p", "2", "--alpha",
                     "0.3", "--beta", "0.4", "--family", "hls", "--out", str(out))
    rep = InequalityReport.from_json(out.read_text())
    assert code == 0 and rep.verdict == "holds"
    assert rep.function_ids[0].startswith("hlsOptimizer(s=0.7")
    assert rep.extra["tier"] == "quick" and rep.constant_label == "sharp"


def test_verify_deterministic_body(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        code, _, _ = run(capsys, "verify", "--theorem", "BBM", "--n", "1", "--p", "1.5",
                         "--beta", "0.25", "--tier", "quick", "--seed", "7", "--out", str(p))
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    body = json.loads(paths[0].read_text())
    assert "runtimeMs" not in body and body["extra"]["seed"] == 7


def test_verify_stdout_and_violated_exit(capsys, monkeypatch):
    def fake(theorem, params, family, tier, seed):
        return InequalityReport("BBM", Params(n=1), ["x"], 1.0, 2.0, 1.0)
    monkeypatch.setattr(cli, "run_point", fake)
    code, out, _ = run(capsys, "verify", "--theorem", "BBM", "--n", "1")
    assert code == 1 and json.loads(out)["verdict"] == "violated"

    def fake_div(theorem, params, family, tier, seed):
        return InequalityReport("BBM", Params(n=1), ["x"], 1.0, math.inf, 1.0)
    monkeypatch.setattr(cli, "run_point", fake_div)
    assert run(capsys, "verify", "--theorem", "BBM", "--n", "1")[0] == 4


# --- manifests ---

def test_parse_manifest_lists_ranges_comments():
    m = parse_manifest("# header\ntheorems = BBM, T3  # trailing\n\nn = 1,2\n"
                       "beta = 0.2:0.4:3\nlambda = 0.5\ntier = quick\nseed = 3\n")
    assert m.theorems == ["BBM", "T3"] and m.n == [1, 2]
    assert m.beta == pytest.approx([0.2, 0.3, 0.4]) and m.lam == [0.5]
    assert m.tier == "quick" and m.seed == 3
    assert len(m.points()) == 2 * 2 * 3


@pytest.mark.parametrize("text,line", [
    ("theorems = BBM\nn 1\n", 2),
    ("theorems = BBM\nbogus = 1\n", 2),
    ("n = 1\ntheorems = BBM\nn = 2\n", 3),
    ("theorems = BBM\np = two\n", 2),
    ("theorems = BBM, T99\n", 1),
    ("theorems = BBM\ntier = fast\n", 2),
    ("theorems =\n", 1),
    ("theorems = BBM\nbeta = 0:1:0\n", 2),
])
def test_manifest_errors_carry_line(text, line):
    with pytest.raises(ManifestError) as e:
        parse_manifest(text)
    assert e.value.line == line and f"line {line}" in str(e.value)


def test_manifest_without_theorems():
    with pytest.raises(ManifestError, match="empty"):
        parse_manifest("n = 1\n")


def test_sweep_parse_error_exit_2(tmp_path, capsys):
    m = tmp_path / "m.txt"
    m.write_text("theorems = BBM\nn = x\n")
    code, _, err = run(capsys, "sweep", str(m), "--out", str(tmp_path / "o"))
    assert code == 2 and "line 2" in err
    m.write_text("# nothing here\ntheorems = \n")
    assert run(capsys, "sweep", str(m))[0] == 2
    assert run(capsys, "sweep", str(tmp_path / "missing.txt"))[0] == 2


def _sweep(tmp_path, capsys, text, *extra, name="o"):
    m = tmp_path / "m.txt"
    m.write_text(text)
    out = tmp_path / name
    code, _, _ = run(capsys, "sweep", str(m), "--out", str(out), *extra)
    rows = list(csv.reader((out / "summary.csv").read_text().splitlines()))
    return code, out, rows


MANIFEST = """theorems = BBM, Lemma1
n = 1
p = 2
beta = 0.25, 0.6
families = gaussian, bump
tier = quick
"""


def test_sweep_skip_log_and_row_count(tmp_path, capsys):
    code, out, rows = _sweep(tmp_path, capsys, MANIFEST)
    assert code == 0 and rows[0] == SUMMARY_HEADER
    reports = sorted((out / "reports").iterdir())
    skips = (out / "skipped.log").read_text().splitlines()
    assert len(rows) - 1 == len(reports) + len(skips) == 8
    # beta = 0.6 breaks p < n/beta for both theorems
    assert len(skips) == 4 and all("AdmissibilityError" in s for s in skips)
    verdicts = [r[11] for r in rows[1:]]
    assert verdicts.count("skipped") == 4 and verdicts.count("holds") == 4
    assert [r[0] for r in rows[1:]] == ["BBM"] * 4 + ["Lemma1"] * 4
    rep = InequalityReport.from_json(reports[0].read_text())
    assert rep.theorem_id == "BBM" and rep.ok


def test_sweep_jobs_and_tier_env(tmp_path, capsys, monkeypatch):
    text = MANIFEST.replace("tier = quick\n", "")
    monkeypatch.setenv("FRACBED_TIER", "quick")
    _, a, rows_a = _sweep(tmp_path, capsys, text, name="a")
    _, b, rows_b = _sweep(tmp_path, capsys, text, "--jobs", "2", name="b")
    ra = sorted(p.name for p in (a / "reports").iterdir())
    assert ra == sorted(p.name for p in (b / "reports").iterdir())
    for name in ra:
        assert (a / "reports" / name).read_bytes() == (b / "reports" / name).read_bytes()
    assert [r[:11] for r in rows_a] == [r[:11] for r in rows_b]
    assert json.loads((a / "reports" / ra[0]).read_text())["extra"]["tier"] == "quick"


def test_sweep_violation_exit_1(tmp_path, capsys, monkeypatch):
    def fake(index, point, tier, seed):
        return index, InequalityReport("BBM", Params(n=1), ["x"], 1.0, 2.0, 1.0), None
    monkeypatch.setattr(cli, "_sweep_task", fake)
    code, _, rows = _sweep(tmp_path, capsys, "theorems = BBM\n")
    assert code == 1 and rows[1][11] == "violated"


def test_acceptance_manifest_sweep(tmp_path, capsys):
    code = main(["sweep", str(ROOT / "manifests" / "acceptance.txt"),
                 "--out", str(tmp_path / "acc")])
    capsys.readouterr()
    rows = list(csv.reader((tmp_path / "acc" / "summary.csv").read_text().splitlines()))
    assert code == 0
    verdicts = {r[11] for r in rows[1:]}
    assert verdicts <= {"holds", "holds-within-error", "skipped"}
