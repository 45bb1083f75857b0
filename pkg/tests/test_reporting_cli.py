import csv
import json
import math

import pytest

from glsalgebra.cli import cli_main
from glsalgebra.lab import VerificationReport
from glsalgebra.reporting import (CampaignConfig, ReportError, canonical_json, emit_report,
                                  report_document)

CASE_KEYS = ["id", "tag", "lhs", "rhs", "ratio", "pass", "tolerances", "provenance"]


def _report(lhs=1.0, rhs=2.0, mode="le"):
    return VerificationReport("case:1", "young", lhs, rhs, {"mode": mode, "rel": 1e-6}, {"seed": 7})


class TestJson:
    def test_key_order_and_values(self, tmp_path):
        path = tmp_path / "r.json"
        n = emit_report([_report()], "json", str(path), seed=7, config=CampaignConfig("verify"))
        text = path.read_text()
        assert n == len(text.encode())
        doc = json.loads(text)
        assert list(doc) == ["version", "seed", "config", "cases"]
        assert list(doc["cases"][0]) == CASE_KEYS
        assert doc["cases"][0]["pass"] is True
        assert doc["cases"][0]["ratio"] == 0.5

    def test_non_finite_as_strings(self):
        rep = VerificationReport("c", "expected-divergence", math.inf, 1.0,
                                 {"mode": "expected-divergence", "rel": 0.0})
        doc = json.loads(canonical_json(report_document([rep])))
        assert doc["cases"][0]["lhs"] == "inf"
        assert doc["cases"][0]["pass"] is True

    def test_floats_round_trip(self):
        x = 0.1 + 0.2
        assert json.loads(canonical_json({"x": x}))["x"] == x

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            emit_report([], "json", "-")

    def test_unwritable(self, tmp_path):
        with pytest.raises(ReportError):
            emit_report([_report()], "json", str(tmp_path / "missing" / "r.json"))


def test_csv(tmp_path):
    path = tmp_path / "r.csv"
    emit_report([_report(), _report(3.0, 2.0)], "csv", str(path))
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["id", "tag", "lhs", "rhs", "ratio", "pass"]
    assert [r[-1] for r in rows[1:]] == ["true", "false"]


class TestConfig:
    def test_round_trip(self):
        cfg = CampaignConfig("verify", target="algebra", seed=3, pairs=5, psi=("power-m:2",),
                             exponents=(1.0, math.inf), deltas=(1e-3,))
        assert CampaignConfig.from_canonical(cfg.canonical()) == cfg

    def test_unknown_key(self):
        with pytest.raises(ValueError):
            CampaignConfig.from_dict({"command": "verify", "colour": "red"})

    def test_bad_format(self):
        with pytest.raises(ValueError):
            CampaignConfig("verify", format="xml")


class TestCli:
    def test_norm(self, capsys):
        assert cli_main(["norm", "--family", "indicator:0:1", "--p", "3"]) == 0
        assert float(capsys.readouterr().out) == pytest.approx(1.0, rel=1e-12)

    def test_grand_norm(self, capsys):
        assert cli_main(["grand-norm", "--family", "gaussian:1", "--psi", "gaussian:1"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["value"] == pytest.approx(1.0, abs=1e-6)

    def test_verify_algebra(self, tmp_path):
        out = tmp_path / "a.json"
        code = cli_main(["verify", "algebra", "--seed", "7", "--pairs", "10", "--psi", "power-m:2",
                         "-o", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert len(doc["cases"]) == 10 and all(c["pass"] for c in doc["cases"])
        assert doc["config"]["psi"] == ["power-m:2"]

    def test_deterministic(self, tmp_path):
        args = ["verify", "algebra", "--seed", "7", "--pairs", "3", "--psi", "gaussian:1"]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert cli_main(args + ["-o", str(a)]) == 0
        assert cli_main(args + ["-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_convolve_csv(self, tmp_path):
        out = tmp_path / "h.csv"
        assert cli_main(["convolve", "--f", "indicator:0:1", "--g", "indicator:0:1",
                         "--L", "4", "--n", "64", "-o", str(out)]) == 0
        rows = list(csv.reader(out.open()))
        assert rows[0] == ["x", "h"] and len(rows) == 65

    def test_curve(self, tmp_path):
        out = tmp_path / "c.csv"
        assert cli_main(["curve", "--family", "gaussian:1", "--psi", "gaussian:1", "--exact",
                         "--nodes", "9", "-o", str(out)]) == 0
        rows = list(csv.reader(out.open()))[1:]
        assert all(float(r[1]) == pytest.approx(1.0, rel=1e-12) for r in rows)

    def test_counterexample_csv(self, capsys):
        assert cli_main(["counterexample", "--format", "csv"]) == 0
        out = capsys.readouterr().out
        assert "expected-divergence" in out and "false" not in out

    @pytest.mark.parametrize("argv", [["bogus"], ["norm", "--family", "gaussian:1"],
                                      ["norm", "--family", "nope:1", "--p", "2"],
                                      ["grand-norm", "--family", "gaussian:1", "--psi", "cubic"],
                                      ["verify", "algebra", "--pairs", "0"]])
    def test_usage_errors(self, argv, capsys):
        assert cli_main(argv) == 2
        assert capsys.readouterr().err

    def test_unwritable_output(self, tmp_path):
        bad = str(tmp_path / "missing" / "r.json")
        assert cli_main(["verify", "scaling", "-o", bad]) == 2

    def test_failing_case_exit_one(self, capsys):
        # X below the asymptotic regime makes the p = 2 slope fit miss
        assert cli_main(["counterexample", "--X", "100", "1000", "10000", "100000"]) == 1

    def test_help(self, capsys):
        assert cli_main(["--help"]) == 0
