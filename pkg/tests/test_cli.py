"""The command-line front end: JSON contracts, exit codes, fixture
registry resolution, tracing, and output determinism."""

import json
import os
import subprocess
import sys

import pytest

from origami_forge import cli
from origami_forge.origami import format_origami, wollmilchsau


def run_cli(capsys, *argv):
    code = cli.run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.fixture()
def ori_file(tmp_path):
    path = tmp_path / "w.ori"
    path.write_text(format_origami(wollmilchsau()))
    return str(path)


class TestAnalyze:
    def test_four_cylinder_report(self, capsys, ori_file):
        data = run_json(capsys, "analyze", ori_file)
        assert data == {
            "schema": 1,
            "d": 8,
            "genus": 3,
            "cylinders": [[1, 2, 3, 4], [5, 6, 7, 8]],
            "vertex_orbits": [[1, 3], [2, 4], [5, 7], [6, 8]],
        }

    def test_registry_name_resolution(self, capsys):
        data = run_json(capsys, "analyze", "o14")
        assert data["genus"] == 4

    def test_missing_file_is_domain_error(self, capsys):
        code, out, err = run_cli(capsys, "analyze", "/no/such/file.ori")
        assert code == 1 and out == ""
        payload = json.loads(err)
        assert payload["schema"] == 1
        assert payload["error"]["type"] == "BadFormat"

    def test_malformed_file_is_domain_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.ori"
        bad.write_text("squares: 2\np1: (1 3)\np2: (1 2)\n")
        code, _, err = run_cli(capsys, "analyze", str(bad))
        assert code == 1
        assert json.loads(err)["error"]["type"] == "BadFormat"

    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.run(["no-such-command"])
        assert exc.value.code == 2


class TestHss:
    def test_walkthrough_curves(self, capsys):
        data = run_json(capsys, "hss", "o14")
        words = [c["word"] for c in data["curves"]]
        assert "x^-3 y^-1 x y" in words
        assert data["step1_cuts"] == [
            {"start": 1, "word": "x^4"},
            {"start": 5, "word": "x^3"},
        ]

    def test_trace_emits_json_lines(self, capsys):
        code, out, err = run_cli(capsys, "hss", "wollmilchsau", "--trace")
        assert code == 0
        events = [json.loads(line) for line in err.splitlines()]
        assert any(e["event"] == "merge" for e in events)
        assert events[0]["event"] == "start"
        assert events[-1]["event"] == "final"

    def test_verify_reports_all_invariants(self, capsys):
        data = run_json(capsys, "verify-hss", "wollmilchsau")
        assert data["ok"]
        assert data["curve_count"] == data["genus"] == 3
        assert data["closed"] and data["conjugate_horizontal"]
        assert data["independent"]

    def test_every_registry_fixture_verifies(self, capsys):
        for name in cli.FIXTURES:
            data = run_json(capsys, "verify-hss", name)
            assert data["ok"], name


class TestVeechCheck:
    def test_member(self, capsys):
        data = run_json(capsys, "veech-check", "l22", "--matrix", "1,2,0,1")
        assert data["member"] is True
        assert data["witness_square"] == 1

    def test_non_member(self, capsys):
        data = run_json(capsys, "veech-check", "o14", "--matrix", "1,1,0,1")
        assert data["member"] is False
        assert data["witness_square"] is None

    def test_non_unimodular_is_domain_error(self, capsys):
        code, _, err = run_cli(
            capsys, "veech-check", "l22", "--matrix", "2,0,0,2"
        )
        assert code == 1
        assert json.loads(err)["error"]["type"] == "NotUnimodular"


class TestShearAndHomology:
    def test_shear_change_matrix(self, capsys):
        data = run_json(capsys, "shear", "l22", "--p", "1", "--q", "1")
        assert data["d"] == 3
        assert data["change"] == [["1", "1"], ["0", "1"]]

    def test_homology_report(self, capsys):
        data = run_json(capsys, "homology", "wollmilchsau")
        assert data["rank"] == 6
        assert len(data["intersection_matrix"]) == 6

    def test_twist_certificate(self, capsys):
        data = run_json(capsys, "homology", "l22", "--twist")
        cert = data["certificate"]
        assert cert["multiplier"] == 2
        assert cert["charpoly_divides"] is True


class TestMoebius:
    def test_loxodromic_with_degenerate_form(self, capsys):
        data = run_json(capsys, "moebius", "2,0", "0,0", "0,0", "0.5,0")
        assert data["classification"] == "loxodromic"
        assert data["conjugated"] is True
        assert data["roundtrip"] is True
        assert abs(data["multiplier"][0] - 0.25) < 1e-9

    def test_elliptic(self, capsys):
        data = run_json(capsys, "moebius", "--", "0,0", "1,0", "-1,0", "0,0")
        assert data["classification"] == "elliptic"

    def test_bad_entry_is_domain_error(self, capsys):
        code, _, err = run_cli(capsys, "moebius", "x", "0,0", "0,0", "1,0")
        assert code == 1
        assert json.loads(err)["error"]["type"] == "BadFormat"


class TestFixtures:
    def test_registry_listing(self, capsys):
        data = run_json(capsys, "fixtures")
        names = {e["name"] for e in data["origamis"]}
        assert {"wollmilchsau", "o14", "l22"} <= names
        assert all(e["present"] for e in data["origamis"])
        assert all(w["present"] for w in data["word_fixtures"])

    def test_environment_override(self, capsys, tmp_path, monkeypatch):
        custom = tmp_path / "w2.ori"
        custom.write_text(format_origami(wollmilchsau()))
        monkeypatch.setenv("ORIGAMI_FORGE_FIXTURES", str(tmp_path))
        data = run_json(capsys, "fixtures")
        assert data["directory"] == str(tmp_path)
        present = [e for e in data["origamis"] if e["present"]]
        assert present == []  # no registry files in the override dir


class TestSweepAndDeterminism:
    def test_small_sweep_passes(self, capsys):
        data = run_json(
            capsys, "sweep", "--count", "12", "--seed", "3", "--max-d", "10"
        )
        assert data["ok"] is True
        assert len(data["results"]) == 12
        assert [r["index"] for r in data["results"]] == list(range(12))

    def test_identical_invocations_byte_identical(self, capsys):
        argv = ["sweep", "--count", "6", "--seed", "11"]
        code1 = cli.run(argv)
        out1 = capsys.readouterr().out
        code2 = cli.run(argv)
        out2 = capsys.readouterr().out
        assert code1 == code2 == 0
        assert out1 == out2

    def test_installed_entry_point(self, ori_file):
        proc = subprocess.run(
            [sys.executable, "-m", "origami_forge.cli", "analyze", ori_file],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["genus"] == 3
