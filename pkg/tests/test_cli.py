import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from dblshuffle.cli import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--format", "json")
    assert code == EXIT_OK, err
    return json.loads(out)


def test_regularize_series_example():
    code, out, _ = call("regularize", "--mode", "series", "--index", "(1,1)")
    assert code == EXIT_OK
    assert out.strip() == "1/2*T^2 - 1/2*ζ(2)"


def test_regularize_compare_json():
    data = call_json("regularize", "--mode", "compare", "--index", "(1,2)")
    assert data["holds"] is True


def test_relations_verified():
    code, out, _ = call("relations", "--weight", "4", "--verify-digits", "25")
    assert code == EXIT_OK
    data = call_json("relations", "--weight", "4", "--verify-digits", "25")
    assert data["rank"] == 5
    assert float(data["numeric"]["max_residual"]) < 1e-20


def test_relations_basis_and_membership():
    data = call_json("relations", "--weight", "3", "--basis")
    assert data["rank"] == 1 and len(data["basis"]) == 1
    target = [
        {"t_power": 0, "monomial": [["(3)", 1]], "coefficient": "1"},
        {"t_power": 0, "monomial": [["(1,2)", 1]], "coefficient": "-1"},
    ]
    data = call_json("relations", "--weight", "3", "--contains", json.dumps(target))
    assert data["contains"] is True
    code, _, _ = call("relations", "--weight", "3", "--contains", "{not json")
    assert code == EXIT_USAGE


def test_lmap():
    code, out, _ = call("lmap", "--t-power", "2")
    assert code == EXIT_OK and out.strip() == "T^2 - ζ(2)"
    code, _, _ = call("lmap", "--t-power", "1", "--index", "(2)")
    assert code == EXIT_USAGE


def test_eval_and_domain_error():
    data = call_json("eval", "--index", "(1,2)", "--digits", "25")
    assert abs(Fraction(data["value"]) - Fraction("1.202056903159594285399738161511")) < Fraction(1, 10**24)
    code, out, _ = call("eval", "--index", "(2,1)")
    assert code == EXIT_DOMAIN
    assert json.loads(out)["error"] == "NonAdmissible"


def test_eval_mpl_and_padic():
    data = call_json("eval-mpl", "--index", "(1)", "--point", "0.5")
    assert abs(Fraction(data["value"]) - Fraction("0.6931471805599453094172321214581766")) < Fraction(1, 10**28)
    code, out, _ = call("eval-padic", "--index", "(1)", "--point", "7", "-p", "7", "-N", "10")
    assert code == EXIT_OK and out.strip().endswith("O(7^10)")
    code, out, _ = call("eval-padic", "--point", "2", "--log", "-p", "5")
    assert code == EXIT_OK
    code, _, _ = call("eval-padic", "--index", "(1)", "--point", "1/7", "-p", "7")
    assert code == EXIT_DOMAIN
    code, _, _ = call("eval-padic", "--index", "(1)", "--point", "7", "-p", "8")
    assert code == EXIT_USAGE


def test_dmr_check():
    data = call_json("dmr-check", "--series", "kz", "--degree", "4")
    assert data["ok"] is True
    data = call_json("dmr-check", "--series", "exp", "--alpha", "1", "--beta", "2")
    assert data["condition3"] is False and data["ok"] is False
    data = call_json("dmr-check", "--series", "exp", "--alpha", "0", "--beta", "2")
    assert data["condition2"] is True and data["condition3"] is True


def test_moduli_commands():
    code, out, _ = call("moduli", "point-r", "--n", "3")
    assert code == EXIT_OK and out.strip() == "(1/2, 2/3, 0)"
    data = call_json("moduli", "divisors", "--n", "6", "--count-only")
    assert data["count"] == 25
    code, out, _ = call("moduli", "intersect", "--p", "1,2|3,4,5", "--q", "1,3|2,4,5")
    assert code == EXIT_OK and out.strip() == "false"
    code, _, _ = call("moduli", "intersect", "--p", "1,2|3,4,5", "--q", "1,2|3,4,5,6")
    assert code == EXIT_DOMAIN
    data = call_json("moduli", "chart", "--tree", "binary:2")
    assert len(data["coordinates"]) == 2
    code, _, _ = call("moduli", "chart", "--tree", "1|2,3")
    assert code == EXIT_USAGE


def test_usage_errors():
    assert call("bogus")[0] == EXIT_USAGE
    assert call("relations")[0] == EXIT_USAGE
    assert call("relations", "--weight", "0")[0] == EXIT_USAGE
    assert call("eval", "--index", "(0,2)")[0] == EXIT_USAGE
    assert call("eval", "--index", "(2)", "--digits", "-3")[0] == EXIT_USAGE


def test_config_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "c.toml"
    cfg.write_text("digits = 12\noutput = \"json\"\n")
    code, out, _ = call("eval", "--index", "(2)", "--config", str(cfg))
    data = json.loads(out)
    assert data["digits"] == 12
    monkeypatch.setenv("DBLSHUFFLE_DIGITS", "18")
    data = json.loads(call("eval", "--index", "(2)", "--config", str(cfg))[1])
    assert data["digits"] == 18
    data = json.loads(call("eval", "--index", "(2)", "--config", str(cfg), "--digits", "22")[1])
    assert data["digits"] == 22
    monkeypatch.setenv("DBLSHUFFLE_DIGITS", "many")
    assert call("eval", "--index", "(2)")[0] == EXIT_USAGE
    bad = tmp_path / "bad.toml"
    bad.write_text("digits = [\n")
    monkeypatch.delenv("DBLSHUFFLE_DIGITS")
    assert call("eval", "--index", "(2)", "--config", str(bad))[0] == EXIT_USAGE


def test_selftest_and_module_entry_point():
    data = call_json("selftest")
    assert data["ok"] and all(c["ok"] for c in data["checks"])
    proc = subprocess.run(
        [sys.executable, "-m", "dblshuffle", "moduli", "point-r", "--n", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "(1/2, 0)"
