"""Tests for the CLI module."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from realclifford import __version__, rules
from realclifford.cli import main
from realclifford.circuit import make_gate
from realclifford.rules import derive_rule, identity_rules

DATA_DIR = Path(__file__).parent / "data"


def parse_ndjson(output):
    """Parse NDJSON (one JSON object per line) output."""
    return [json.loads(line) for line in output.strip().split('\n') if line.strip()]


@pytest.fixture
def circuits(tmp_path):
    """A few circuit files on disk."""
    files = {
        "hh": "qubits 1\nH 0\nH 0\n",
        "empty": "qubits 1\n",
        "h": "qubits 1\nH 0\n",
        "pair": "qubits 2\n# mixed\nH 0\nCZ 0 1\nZ 1\nH 1\n",
        "two": "qubits 2\n",
        "bad": "qubits 1\nY 0\n",
    }
    paths = {}
    for name, text in files.items():
        path = tmp_path / f"{name}.rsc"
        path.write_text(text)
        paths[name] = str(path)
    return paths


# Normalization

def test_normalize_synth(circuits):
    runner = CliRunner()
    result = runner.invoke(main, ["normalize", "--in", circuits["h"]])

    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["n"] == 1
    assert len(data["stages"]) == 1


def test_normalize_methods_agree(circuits):
    runner = CliRunner()
    synth = runner.invoke(main, ["normalize", "--in", circuits["pair"]])
    rewrite = runner.invoke(main, ["normalize", "--in", circuits["pair"], "--method", "rewrite"])

    assert synth.exit_code == rewrite.exit_code == 0
    assert synth.stdout == rewrite.stdout


def test_normalize_trace(circuits):
    runner = CliRunner()
    result = runner.invoke(main, ["normalize", "--in", circuits["pair"], "--method", "rewrite", "--trace"])

    assert result.exit_code == 0
    steps = parse_ndjson(result.stderr)
    assert steps
    assert set(steps[0]) == {"position", "rule", "family", "part", "measure"}


def test_normalize_out_file(circuits, tmp_path):
    out = tmp_path / "nf.json"
    runner = CliRunner()
    result = runner.invoke(main, ["normalize", "--in", circuits["empty"], "--out", str(out)])

    assert result.exit_code == 0
    assert result.stdout == ""
    assert json.loads(out.read_text())["sign"] == 1


def test_normalize_verbose_is_indented(circuits):
    runner = CliRunner()
    result = runner.invoke(main, ["normalize", "--in", circuits["empty"], "-v"])

    assert result.exit_code == 0
    assert result.stdout.startswith("{\n  ")


def test_normalize_with_rule_file(circuits, tmp_path):
    rule_file = tmp_path / "bad.rules"
    rule_file.write_text("Z 0;C1 0 @colors S -> C2 0;Z 0\n")
    runner = CliRunner()
    result = runner.invoke(main, ["normalize", "--in", circuits["h"], "--method", "rewrite",
                                  "--rules", str(rule_file)])

    assert result.exit_code == 2
    assert json.loads(result.stderr)["error"] == "RULE_FILE_ERROR"


# Equality and matrices

def test_equal_same_operator(circuits):
    runner = CliRunner()
    result = runner.invoke(main, ["equal", circuits["hh"], circuits["empty"]])

    assert result.exit_code == 0
    assert json.loads(result.stdout) == {"equal": True}


def test_equal_different_operator(circuits):
    runner = CliRunner()
    result = runner.invoke(main, ["equal", circuits["h"], circuits["empty"], "--matrix"])

    assert result.exit_code == 1
    assert json.loads(result.stdout) == {"equal": False}


def test_equal_qubit_mismatch(circuits):
    runner = CliRunner()
    result = runner.invoke(main, ["equal", circuits["h"], circuits["two"]])

    assert result.exit_code == 2
    assert json.loads(result.stderr)["error"] == "INVALID_ARGUMENT"


def test_matrix_hadamard(circuits):
    runner = CliRunner()
    result = runner.invoke(main, ["matrix", "--in", circuits["h"]])

    assert result.exit_code == 0
    assert result.stdout == "1/r^1\t1/r^1\n1/r^1\t-1/r^1\n"


def test_matrix_cap(circuits):
    runner = CliRunner()
    result = runner.invoke(main, ["matrix", "--in", circuits["two"], "--matrix-cap", "1"])

    assert result.exit_code == 2
    error = json.loads(result.stderr)
    assert error["error"] == "MATRIX_CAP_EXCEEDED"
    assert "--matrix-cap" in error["suggestion"]


def test_actions_ndjson():
    runner = CliRunner()
    result = runner.invoke(main, ["actions"])

    assert result.exit_code == 0
    rows = parse_ndjson(result.stdout)
    assert rows[0]["gate"] == "A1"
    assert all(set(row) == {"gate", "inputs", "outputs", "source", "image"} for row in rows)


def test_actions_match_checked_in_table():
    runner = CliRunner()
    result = runner.invoke(main, ["actions"])

    assert result.exit_code == 0
    assert result.stdout == (DATA_DIR / "actions.ndjson").read_text()


# Relations and rules

def test_verify_reduced_relations():
    runner = CliRunner()
    result = runner.invoke(main, ["verify-relations", "--set", "reduced"])

    assert result.exit_code == 0
    assert result.stdout.strip() == "16/16 verified"


def test_verify_alternative_verbose():
    runner = CliRunner()
    result = runner.invoke(main, ["verify-relations", "--set", "alternative", "-v"])

    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["set"] == "alt"
    assert report["verified"] == report["total"] == 19


def test_verify_typed_rule_file(tmp_path):
    rule_file = tmp_path / "bad.rules"
    rule_file.write_text("Z 0;C1 0 @colors S -> C2 0;Z 0 # z-ladder\n")
    runner = CliRunner()
    result = runner.invoke(main, ["verify-relations", "--set", "typed", "--rules", str(rule_file)])

    assert result.exit_code == 1
    assert result.stdout.strip() == "0/1 verified"
    assert parse_ndjson(result.stderr)[0]["name"].startswith("Z 0;C1 0")


def test_verify_unknown_set():
    runner = CliRunner()
    result = runner.invoke(main, ["verify-relations", "--set", "bogus"])

    assert result.exit_code == 2


def test_derive_rules(monkeypatch, tmp_path):
    small = identity_rules() + [derive_rule((make_gate("X", 0), make_gate("C1", 0)), "z-ladder")]
    monkeypatch.setattr(rules, "derive_typed_rules", lambda: small)
    out = tmp_path / "typed.rules"
    runner = CliRunner()
    result = runner.invoke(main, ["derive-rules", "--out", str(out), "--no-cache", "-v"])

    assert result.exit_code == 0
    assert json.loads(result.stderr) == {"identity": 2, "z-ladder": 1}
    lines = out.read_text().splitlines()
    assert lines[0].startswith("#")
    assert "X 0;C1 0 @colors S -> C2 0 # z-ladder" in lines


# Counting and enumeration

def test_count():
    runner = CliRunner()
    result = runner.invoke(main, ["count", "-n", "2"])

    assert result.exit_code == 0
    assert json.loads(result.stdout)["clifford_order"] == 2304


def test_count_invalid():
    runner = CliRunner()
    result = runner.invoke(main, ["count", "-n", "0"])

    assert result.exit_code == 2
    assert json.loads(result.stderr)["error"] == "INVALID_ARGUMENT"


def test_enumerate_limit():
    runner = CliRunner()
    result = runner.invoke(main, ["enumerate", "-n", "1", "--limit", "3"])

    assert result.exit_code == 0
    forms = parse_ndjson(result.stdout)
    assert len(forms) == 3
    assert forms[0]["stages"][0]["z"]["a"] == "A1"


def test_enumerate_check_distinct():
    runner = CliRunner()
    result = runner.invoke(main, ["enumerate", "-n", "1", "--check-distinct"])

    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["ok"] is True
    assert report["distinct"] == 16


# Errors and version

def test_parse_error_is_structured(circuits):
    runner = CliRunner()
    result = runner.invoke(main, ["normalize", "--in", circuits["bad"]])

    assert result.exit_code == 2
    error = json.loads(result.stderr)
    assert error["error"] == "PARSE_ERROR"
    assert "line 2" in error["message"]
    assert error["code"] == 2


def test_missing_file(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main, ["matrix", "--in", str(tmp_path / "absent.rsc")])

    assert result.exit_code == 2
    assert json.loads(result.stderr)["error"] == "IO_ERROR"


def test_version():
    runner = CliRunner()
    result = runner.invoke(main, ["--version"])

    assert result.exit_code == 0
    assert f"rclif version {__version__}" in result.output


def test_rewrite_empty_circuit_is_identity(circuits):
    runner = CliRunner()
    result = runner.invoke(main, ["normalize", "--in", circuits["empty"], "--method", "rewrite"])

    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["sign"] == 1
    assert data["stages"][0]["z"] == {"m": 0, "a": "A1", "bs": [], "c": "C1"}
    assert data["stages"][0]["x"] == {"ds": [], "e": "E1"}
