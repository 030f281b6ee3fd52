from __future__ import annotations

import json

import pytest

from looplab import cli
from looplab.verify import (
    CheckRecord,
    RunConfig,
    UsageError,
    corrupted_action,
    run_suite,
)


def test_dimensions_suite_gives_twenty_passes():
    report = run_suite(RunConfig(suite="dimensions", L_min=1, L_max=10))
    assert report.summary() == {"pass": 20, "fail": 0, "skipped": 0, "total": 20}
    assert report.exit_status == 0


def test_ground_states_suite():
    report = run_suite(RunConfig(suite="ground-states", L_min=3, L_max=4, mode="one"))
    assert report.ok
    ids = [r.id for r in report.records]
    assert "ground-states/one/L4/(())" in ids


def test_reports_are_deterministic():
    cfg = RunConfig(suite="markov", L_min=2, L_max=4, fmt="json")
    first = run_suite(cfg)
    second = run_suite(cfg)
    for fmt in ("json", "csv", "table"):
        assert first.render(fmt) == second.render(fmt)
    assert "runtime" not in first.render("json")


def test_corrupted_generator_fails():
    report = run_suite(RunConfig(suite="relations", L_min=3, L_max=3, action=corrupted_action))
    assert report.exit_status != 0
    assert any(r.id.startswith("relations/") and r.status == "fail" for r in report.records)


def test_usage_errors():
    with pytest.raises(UsageError):
        RunConfig(suite="nope")
    with pytest.raises(UsageError):
        RunConfig(tol=0)
    with pytest.raises(UsageError):
        RunConfig(L_min=5, L_max=3)
    with pytest.raises(UsageError):
        RunConfig(fmt="xml")


def test_record_status_is_checked():
    with pytest.raises(ValueError):
        CheckRecord("x", {}, "1", "1", "maybe")


def test_json_report_shape():
    report = run_suite(RunConfig(suite="density", L_min=3, L_max=4))
    data = json.loads(report.to_json())
    assert [r["id"] for r in data["records"]][:2] == ["density/L3", "density/L4"]
    assert data["records"][0]["expected"] == "1/9"


def test_conjecture_ids_separate_pinned_and_predictions():
    report = run_suite(RunConfig(suite="fpl-conjecture", L_min=4, L_max=5))
    ids = {r.id: r.status for r in report.records}
    assert ids["fpl-conjecture/one/pinned/L4"] == "pass"
    assert ids["fpl-conjecture/one/prediction/L5"] == "pass"


def test_xxz_suite_with_custom_point():
    report = run_suite(RunConfig(suite="xxz", L_min=2, L_max=3, points=((2, 1),), kmax=6))
    assert report.ok and len(report.records) == 2


def test_cli_verify(tmp_path, capsys):
    out = tmp_path / "report.csv"
    status = cli.main(["verify", "--suite", "dimensions", "--L", "1", "10", "--format", "csv", "--out", str(out)])
    assert status == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("id,status") and len(lines) == 21
    assert (tmp_path / "report.csv.runtimes.json").exists()


def test_cli_verify_corrupt_exit_status(capsys):
    assert cli.main(["verify", "--suite", "relations", "--L", "3", "--corrupt"]) == 1
    assert cli.main(["verify", "--suite", "bogus"]) == 2


def test_cli_groundstate(capsys):
    assert cli.main(["groundstate", "--L", "3", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data == {")))": "a", ")()": "a + 2", "())": "2"}
    assert cli.main(["groundstate", "--L", "3", "--mode", "two", "--a", "1", "--b", "2"]) == 0
    assert "|||\t5" in capsys.readouterr().out


def test_cli_basis_and_hamiltonian(capsys):
    assert cli.main(["basis", "--L", "3", "--sector", "LPSTAR"]) == 0
    assert capsys.readouterr().out.split() == ["()|", "|()", "|||"]
    assert cli.main(["hamiltonian", "--L", "2", "--a", "2", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["matrix"] == [["1", "-2"], ["-1", "2"]]


def test_cli_fpl_with_patch_file(tmp_path, capsys):
    from looplab.calibrate import canonical_patch
    path = tmp_path / "p.json"
    canonical_patch("one", 3).save(path)
    assert cli.main(["fpl", "--patch", str(path), "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["configs"] == 6
    assert data["generating_vector"]["))" + ")"] == "a"


def test_cli_fpl_unresolved_patch(capsys):
    assert cli.main(["fpl", "--L", "2", "--mode", "two"]) == 1
    assert "candidate specs" in capsys.readouterr().err
