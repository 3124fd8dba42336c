import csv
import io
import json
import math

import pytest

from qfano.cli import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_VIOLATIONS,
    SWEEP_HEADER,
    ConfigError,
    RunConfig,
    dumps_report,
    fmt,
    main,
    parse_grid,
    run_check,
    run_sweep,
    write_sweep_csv,
)
from qfano.entropies import binary_entropy
from qfano.suites import SUITES, resolve_q, run_suite


def body(report):
    return {k: v for k, v in report.items() if k != "timestamp"}


class TestFormatting:
    def test_fmt(self):
        assert fmt(0.1) == "0.10000000000000001"
        assert fmt(math.inf) == "inf"
        assert fmt(-math.inf) == "-inf"
        assert fmt(0.75) == "0.75"

    def test_report_inf_is_string(self):
        text = dumps_report({"seed": 1, "suites": [{"failures": [{"lhs": math.inf, "rhs": 0.5}]}]})
        assert json.loads(text)["suites"][0]["failures"][0]["lhs"] == "inf"

    def test_parse_grid(self):
        assert parse_grid("0:1:3") == [0.0, 0.5, 1.0]
        assert parse_grid("0.1,0.2") == [0.1, 0.2]


class TestConfig:
    def test_trials_zero(self):
        with pytest.raises(ConfigError):
            RunConfig(trials=0).validate()

    def test_bad_dims(self):
        with pytest.raises(ConfigError):
            RunConfig(dims=[1]).validate()
        with pytest.raises(ConfigError):
            RunConfig(dims=[9]).validate()

    def test_unknown_suite(self):
        with pytest.raises(ConfigError):
            RunConfig(suites=["nope"]).validate()

    def test_q_window(self):
        with pytest.raises(ConfigError):
            RunConfig(suites=["coherent"], q_values=[1.0]).validate()
        with pytest.raises(ConfigError):
            RunConfig(suites=["monotonicity"], q_values=[2.5]).validate()
        RunConfig(suites=["fano"], q_values=[7.0]).validate()

    def test_seed_range(self):
        with pytest.raises(ConfigError):
            RunConfig(seed=-1).validate()
        RunConfig(seed=2**64 - 1).validate()

    def test_ordering_needs_both_sides(self):
        with pytest.raises(ValueError):
            resolve_q(SUITES["ordering"], [0.5])
        assert resolve_q(SUITES["ordering"], [0.2, 0.5, 1.5]) == ((1.5, 0.2), (1.5, 0.5))


class TestRunCheck:
    def test_all_suites_small(self, tmp_path):
        out = tmp_path / "r.json"
        report, status = run_check(RunConfig(trials=10, seed=1, output_path=str(out)))
        assert status == EXIT_OK
        assert [s["name"] for s in report["suites"]] == list(SUITES)
        assert all(s["trials"] == 10 and s["violations"] == 0 and s["failures"] == [] for s in report["suites"])
        assert set(json.loads(out.read_text())) == {"seed", "tol", "timestamp", "suites"}

    def test_deterministic_bodies(self):
        cfg = RunConfig(trials=20, seed=7)
        a, _ = run_check(cfg)
        b, _ = run_check(cfg)
        assert dumps_report(body(a)) == dumps_report(body(b))

    def test_thread_count_independent(self):
        a, _ = run_check(RunConfig(trials=30, seed=3, workers=1))
        b, _ = run_check(RunConfig(trials=30, seed=3, workers=4))
        assert dumps_report(body(a)) == dumps_report(body(b))

    def test_seed_changes_instances(self):
        a = run_suite("fano", 10, 1)
        b = run_suite("fano", 10, 2)
        assert [r.lhs for r in a.reports] != [r.lhs for r in b.reports]

    def test_violations_surface(self, monkeypatch, tmp_path):
        from dataclasses import replace

        from qfano.verifiers import InequalityReport

        def failing(rng, d, q, tol, tag):
            return InequalityReport("broken", math.inf if q == 1.0 else 2.0, 1.0, tol, tag)

        monkeypatch.setitem(SUITES, "broken", replace(SUITES["fano"], name="broken", instance=failing))
        out = tmp_path / "r.json"
        report, status = run_check(RunConfig(suites=["broken"], trials=7, q_values=[1.0, 2.0], output_path=str(out)))
        assert status == EXIT_VIOLATIONS
        s = report["suites"][0]
        assert s["violations"] == 7 and len(s["failures"]) == 7
        assert s["failures"][0]["instance"].startswith("broken#0 seed=0 d=2 q=1.0")
        text = out.read_text()
        assert '"lhs": "inf"' in text
        assert main(["check", "--suite", "broken", "--trials", "2", "--out", str(out)]) == EXIT_VIOLATIONS


class TestSweep:
    def test_depolarizing_row(self):
        rows = run_sweep("depolarizing", [1.0], 2, 2.0)
        r = rows[0]
        assert r["fidelity"] == pytest.approx(0.25, abs=1e-15)
        assert r["exchange"] == pytest.approx(0.75, abs=1e-15)
        assert r["fano_bound"] == pytest.approx(0.75, abs=1e-15)
        assert abs(r["gap"]) <= 1e-15

    def test_identity_family(self):
        for r in run_sweep("identity", parse_grid("0:1:5"), 3, 1.5):
            assert r["fidelity"] == pytest.approx(1.0) and abs(r["exchange"]) <= 1e-12 and r["fano_bound"] == 0.0

    def test_amplitude_damping_shannon(self):
        for r in run_sweep("amplitude_damping", parse_grid("0:1:11"), 2, 1.0):
            assert r["exchange"] == pytest.approx(binary_entropy(r["param"], 1.0), abs=1e-9)

    def test_csv_layout(self, tmp_path):
        path = tmp_path / "s.csv"
        run_sweep("depolarizing", [0.0, 1.0], 2, 2.0, str(path))
        raw = path.read_bytes()
        assert b"\r" not in raw
        lines = raw.decode().splitlines()
        assert lines[0] == "channel,param,dim,q,fidelity,exchange,fano_bound,gap"
        assert lines[0].split(",") == SWEEP_HEADER
        assert len(lines) == 3
        row = next(csv.DictReader(io.StringIO(raw.decode()[raw.decode().index("\n") + 1 :]), fieldnames=SWEEP_HEADER))
        assert row["channel"] == "depolarizing"

    def test_errors(self):
        with pytest.raises(ConfigError):
            run_sweep("erasure", [0.5], 2, 1.0)
        with pytest.raises(ConfigError):
            run_sweep("depolarizing", [1.5], 2, 1.0)


class TestMain:
    def test_check_exit_ok(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        assert main(["check", "--suite", "fano,lemma", "--trials", "5", "--seed", "1", "--out", str(out)]) == EXIT_OK
        assert [s["name"] for s in json.loads(out.read_text())["suites"]] == ["fano", "lemma"]

    def test_check_stdout(self, capsys):
        assert main(["check", "--suite", "pinsker", "--trials", "3"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["suites"][0]["name"] == "pinsker"

    def test_trials_zero_exit(self, capsys):
        assert main(["check", "--trials", "0"]) == EXIT_CONFIG
        assert "trials" in capsys.readouterr().err

    def test_unknown_suite_exit(self):
        assert main(["check", "--suite", "bogus"]) == EXIT_CONFIG

    def test_bad_q_exit(self):
        assert main(["check", "--suite", "coherent", "--q", "0.5"]) == EXIT_CONFIG

    def test_unwritable_output(self, tmp_path):
        assert main(["check", "--suite", "lemma", "--trials", "1", "--out", str(tmp_path / "no" / "r.json")]) == EXIT_CONFIG

    def test_sweep_stdout(self, capsys):
        assert main(["sweep", "--channel", "depolarizing", "--param-grid", "1", "--dim", "2", "--q", "2"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines == ["channel,param,dim,q,fidelity,exchange,fano_bound,gap", "depolarizing,1,2,2,0.25,0.75,0.75,0"]

    def test_sweep_unknown_channel(self):
        assert main(["sweep", "--channel", "erasure"]) == EXIT_CONFIG

    def test_sweep_bad_grid(self):
        assert main(["sweep", "--channel", "identity", "--param-grid", "a:b"]) == EXIT_CONFIG


def test_write_sweep_csv_to_buffer():
    buf = io.StringIO()
    write_sweep_csv(run_sweep("phase_damping", [0.5], 2, 1.0), buf)
    assert buf.getvalue().count("\n") == 2
