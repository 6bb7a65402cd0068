import json
import subprocess
import sys

import pytest

from liftlab.cli import main


def test_verify_match_exit_zero(capsys):
    assert main(["verify", "zdanowicz.det", "--n", "3", "--p", "2"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["verdict"] == "NoLift" and rows[0]["status"] == "match"


def test_verify_text_format(capsys):
    assert main(["verify", "coeff.symmetric8", "--p", "7", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("match") and "nonzero(1)" in out


def test_bad_format_is_usage_error(capsys):
    assert main(["verify", "zdanowicz.det", "--format", "xml"]) == 2


def test_unknown_check_is_usage_error(capsys):
    assert main(["verify", "nope"]) == 2
    assert "unknown check" in capsys.readouterr().err


def test_non_prime_p_is_usage_error():
    assert main(["verify", "zdanowicz.det", "--n", "3", "--p", "4"]) == 2


def test_missing_subcommand_is_usage_error():
    assert main([]) == 2


def test_mismatch_exit_one(monkeypatch, capsys):
    from liftlab import verify

    def broken(n, p):
        return verify.Outcome("LiftExists", "NoLift")

    spec = verify.REGISTRY["zdanowicz.det"]
    monkeypatch.setitem(verify.REGISTRY, "zdanowicz.det", verify.CheckSpec(spec.check_id, broken, spec.grid, spec.topics))
    assert main(["verify", "zdanowicz.det", "--n", "3", "--p", "2"]) == 1
    assert json.loads(capsys.readouterr().out)[0]["status"] == "mismatch"


def test_out_file_and_list(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "veronese.derivation", "--out", str(out)]) == 0
    assert json.loads(out.read_text())[0]["check_id"] == "veronese.derivation"
    assert main(["verify", "all", "--list"]) == 0
    assert "pq.containment" in capsys.readouterr().out


def test_groebner_subcommand(tmp_path, capsys):
    f = tmp_path / "ideal.txt"
    f.write_text("# two lines\nx + y\nx - y\n")
    assert main(["groebner", "--ideal", str(f), "--modulus", "q"]) == 0
    assert sorted(capsys.readouterr().out.split()) == ["x", "y"]
    f.write_text("x^2\nx*y\n")
    assert main(["groebner", "--ideal", str(f), "--modulus", "2", "--order", "lex"]) == 0
    assert sorted(capsys.readouterr().out.split()) == ["x*y", "x^2"]


def test_groebner_errors(tmp_path):
    f = tmp_path / "ideal.txt"
    f.write_text("x + \n")
    assert main(["groebner", "--ideal", str(f)]) == 2
    f.write_text("x\n")
    assert main(["groebner", "--ideal", str(f), "--modulus", "4"]) == 2
    assert main(["groebner", "--ideal", str(tmp_path / "missing.txt")]) == 2


def test_pderive_subcommand(capsys):
    assert main(["pderive", "--p", "2", "--expr", "x0^2 + x1^2"]) == 0
    assert capsys.readouterr().out.strip() == "-x0^2*x1^2"
    assert main(["pderive", "--p", "6", "--expr", "x"]) == 2


def test_trace_subcommand(capsys):
    assert main(["trace", "--f", "x", "--p", "2", "--apply", "1"]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert main(["trace", "--f", "x", "--p", "2", "--e", "0", "--apply", "1"]) == 2


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "liftlab.cli", "verify", "cocycle.example.xn", "--format", "text"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "match" in proc.stdout
