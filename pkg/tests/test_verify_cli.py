"""Tests for the verification driver, report serialization, and the CLI."""

from __future__ import annotations

import json

import pytest

from ellsum import (
    SampleConfig,
    VerificationJob,
    report_to_dict,
    report_to_json,
    report_to_table,
    run_bench,
    run_job,
)
from ellsum.cli import main as cli_main
from ellsum.verify import spread_box


def small_job(**kwargs):
    defaults = dict(
        identities=("gr-sum", "frenkel-turaev"),
        n_values=(1, 2), N_values=(0, 1), trials=3,
        config=SampleConfig(seed=5, p_values=(0.0, 0.1)))
    defaults.update(kwargs)
    return VerificationJob(**defaults)


def _strip_timing(report) -> bytes:
    data = report_to_dict(report)
    data.pop("timing")
    return json.dumps(data, indent=2).encode()


# ---------------------------------------------------------------------------
# run_job
# ---------------------------------------------------------------------------


def test_level_zero_grid_is_exact():
    job = VerificationJob(identities="all", n_values=(1, 2), N_values=(0,),
                          trials=1, config=SampleConfig(seed=1, p_values=(0.1,)))
    report = run_job(job)
    assert report.verdict == "pass"
    for trial in report.trials:
        if trial.identity_id == "theta-lemma":
            continue  # no truncation level; generic values
        assert trial.relative_error <= 1e-15


def test_zero_tolerance_is_a_negative_control():
    report = run_job(small_job(tolerance=0.0))
    assert report.verdict == "fail"
    assert any(t.status == "fail" for t in report.trials)
    # failing trials embed the full instance for standalone replay
    data = report_to_dict(report)
    failing = [t for t in data["trials"] if t["status"] == "fail"]
    assert failing and all("instance" in t for t in failing)
    assert all("params" in t["instance"] for t in failing)


def test_report_is_deterministic_modulo_timing():
    job = small_job()
    assert _strip_timing(run_job(job)) == _strip_timing(run_job(job))


def test_parallel_run_produces_identical_report():
    job = small_job()
    serial = _strip_timing(run_job(job, jobs=1))
    parallel = _strip_timing(run_job(job, jobs=2))
    assert serial == parallel


def test_report_structure():
    report = run_job(small_job())
    data = report_to_dict(report)
    assert data["schema_version"] == 1
    assert data["job"]["sample_config"]["seed"] == 5
    assert data["verdict"] == "pass"
    # complex numbers serialize as re/im pairs
    cell = data["cells"][0]
    assert set(cell["p"]) == {"re", "im"}
    trial = data["trials"][0]
    assert set(trial["lhs"]) == {"re", "im"}
    # timing is segregated in its own sub-object
    assert set(data["timing"]) >= {"started_at", "total_seconds"}
    json.loads(report_to_json(report))  # round-trips as valid JSON


def test_table_format():
    text = report_to_table(run_job(small_job()))
    assert "verdict: pass" in text
    assert "gr-sum" in text


def test_resample_exhaustion_fails_report():
    job = small_job(config=SampleConfig(seed=5, p_values=(0.1,),
                                        condition_cap=1e-12, max_resamples=3))
    report = run_job(job)
    assert report.verdict == "fail"
    assert any(t.status == "resample-exhausted" for t in report.trials)


def test_spread_box():
    assert spread_box(3, 4) == (2, 1, 1)
    assert spread_box(4, 4) == (1, 1, 1, 1)
    assert spread_box(2, 0) == (0, 0)


def test_job_validation():
    with pytest.raises(Exception):
        VerificationJob(identities=("nope",))
    with pytest.raises(ValueError):
        small_job(trials=0)
    with pytest.raises(ValueError):
        small_job(N_values=(-1,))
    with pytest.raises(ValueError):
        small_job(output_format="xml")


def test_identities_all_expands():
    job = VerificationJob(identities="all")
    assert len(job.identities) == 11


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def test_bench_memoization_speedup_slo():
    rows = run_bench("gr-sum", n=4, N_values=(8,), config=SampleConfig(seed=2),
                     p=0.05, min_seconds=0.05)
    row = rows[0]
    assert row["terms"] == 165  # compositions of 8 into 4 parts
    assert row["memoized_terms_per_second"] >= row["plain_terms_per_second"]


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


def test_cli_list_prints_eleven(capsys):
    assert cli_main(["list"]) == 0
    out = capsys.readouterr().out
    ids = [line.split()[0] for line in out.splitlines() if line and not line.startswith(" ")]
    assert len(ids) == 11


def test_cli_verify_pass(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code = cli_main(["verify", "--identity", "theta-lemma", "--n", "3",
                     "--trials", "2", "--seed", "7", "--p", "0.1",
                     "--out", str(out_file)])
    assert code == 0
    data = json.loads(out_file.read_text())
    assert data["verdict"] == "pass"


def test_cli_verify_negative_control(capsys):
    code = cli_main(["verify", "--identity", "frenkel-turaev", "--N", "2",
                     "--trials", "1", "--seed", "7", "--p", "0.1",
                     "--tol", "0", "--format", "table"])
    assert code == 1


def test_cli_rejects_negative_N(capsys):
    assert cli_main(["verify", "--identity", "gr-sum", "--N", "-1"]) == 2


def test_cli_rejects_unknown_identity(capsys):
    assert cli_main(["verify", "--identity", "gr-summ"]) == 2


def test_cli_rejects_large_p(capsys):
    assert cli_main(["verify", "--identity", "gr-sum", "--p", "1.5"]) == 2


def test_cli_accepts_complex_p(capsys):
    code = cli_main(["verify", "--identity", "theta-lemma", "--n", "2",
                     "--trials", "1", "--seed", "3", "--p", "0.1+0.05i",
                     "--format", "table"])
    assert code == 0
    assert "0.1+0.05i" in capsys.readouterr().out


def test_cli_usage_error_exit_code(capsys):
    assert cli_main(["verify", "--bad-flag"]) == 2
    assert cli_main([]) == 2


def test_cli_config_file(tmp_path, capsys):
    config = tmp_path / "job.cfg"
    config.write_text(
        "# sample config\n"
        "identities = theta-lemma\n"
        "n = 2\n"
        "trials = 2\n"
        "seed = 9\n"
        "p = 0.1\n"
        "format = table\n")
    assert cli_main(["verify", "--config", str(config)]) == 0
    out = capsys.readouterr().out
    assert "theta-lemma" in out
    # CLI flags override the file
    assert cli_main(["verify", "--config", str(config), "--identity",
                     "frenkel-turaev", "--N", "0", "--format", "table"]) == 0
    out = capsys.readouterr().out
    assert "frenkel-turaev" in out
    assert "theta-lemma" not in out


def test_cli_bad_config_file(tmp_path):
    config = tmp_path / "job.cfg"
    config.write_text("identities theta-lemma\n")
    assert cli_main(["verify", "--config", str(config)]) == 2
    assert cli_main(["verify", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_cli_selftest_small(capsys):
    code = cli_main(["selftest", "--seed", "1", "--theta-samples", "50",
                     "--kernel-samples", "20"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 9


def test_cli_bench_runs(capsys):
    code = cli_main(["bench", "--identity", "gr-sum", "--n", "3", "--N", "2,4",
                     "--seed", "1", "--p", "0.1"])
    assert code == 0
    out = capsys.readouterr().out
    assert "terms/s" in out


def test_cli_version(capsys):
    assert cli_main(["--version"]) == 0
