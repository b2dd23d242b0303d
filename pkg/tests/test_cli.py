from __future__ import annotations

import json
import subprocess
import sys

import pytest

from rzsynth.cli import main, render_epsilon
from rzsynth.diophantine import factorize
from rzsynth.synthesis import synthesize

KEYS = {
    "theta", "epsilon", "mode", "circuit", "tcount", "tcount_lower_bound", "error_bound",
    "u", "t", "k", "candidates", "seed", "effort", "runtime_ms", "verified",
}


def run_json(capsys, *args):
    code = main(list(args) + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out) if code == 0 else None


def test_pi_over_128(capsys):
    code, rep = run_json(capsys, "--theta", "pi/128", "--digits", "10", "--seed", "1")
    assert code == 0
    assert set(rep) == KEYS
    assert rep["tcount"] == 102 and rep["k"] == 52
    assert float(rep["error_bound"]) <= 1e-10
    assert rep["verified"] is None


def test_identity(capsys):
    code, rep = run_json(capsys, "--theta", "0", "--epsilon", "0.5")
    assert code == 0 and rep["circuit"] == "" and rep["tcount"] == 0


def test_verify_flag(capsys):
    code, rep = run_json(capsys, "--theta", "pi/128", "--digits", "10", "--verify")
    assert code == 0 and rep["verified"] is True


def test_text_output(capsys):
    assert main(["--theta", "1/3", "--epsilon", "1e-6"]) == 0
    out = capsys.readouterr().out
    assert "T-count" in out and "circuit" in out


@pytest.mark.parametrize("mode, parity", [("plain", 0), ("phase", 1)])
def test_modes(capsys, mode, parity):
    code, rep = run_json(capsys, "--theta", "0.3", "--digits", "8", "--mode", mode)
    assert code == 0 and rep["tcount"] % 2 == parity


def test_best_mode(capsys):
    code, rep = run_json(capsys, "--theta", "0.3", "--digits", "8", "--mode", "best")
    plain = synthesize("0.3", "1e-8")
    assert code == 0 and rep["tcount"] <= plain.tcount


def test_determinism(capsys):
    args = ["--theta", "pi/9", "--digits", "12", "--seed", "5"]
    _, a = run_json(capsys, *args)
    _, b = run_json(capsys, *args)
    a.pop("runtime_ms"), b.pop("runtime_ms")
    assert json.dumps(a) == json.dumps(b)


@pytest.mark.parametrize(
    "args",
    [
        ["--theta", "banana", "--digits", "10"],
        ["--theta", "pi/0", "--digits", "10"],
        ["--theta", "0.1", "--epsilon", "zero"],
        ["--theta", "0.1", "--epsilon", "-1"],
        ["--theta", "0.1"],
        ["--theta", "0.1", "--digits", "3", "--epsilon", "0.1"],
        ["--digits", "10"],
        ["--theta", "0.1", "--digits", "10", "--mode", "weird"],
        ["--theta", "0.1", "--digits", "10", "--effort", "-1"],
        ["--theta", "0.1", "--epsilon", "0.5", "--mode", "phase"],
        ["--theta", "0.1", "--digits", "10", "--oracle-factors", "/nonexistent.json"],
    ],
)
def test_usage_errors(capsys, args):
    assert main(args) == 2
    capsys.readouterr()


def test_oracle_factors(tmp_path, capsys):
    # pre-factor every candidate n of an unconstrained run
    res = synthesize("0.4", "1e-5")
    table = {str(r.n): [list(pe) for pe in factorize(r.n, None).factors] for r in res.candidates if r.n > 1}
    path = tmp_path / "factors.json"
    path.write_text(json.dumps(table))
    code, rep = run_json(capsys, "--theta", "0.4", "--epsilon", "1e-5", "--oracle-factors", str(path), "--effort", "0")
    assert code == 0 and rep["tcount"] <= res.tcount
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"15": [[15, 1]]}))
    assert main(["--theta", "0.4", "--epsilon", "1e-5", "--oracle-factors", str(bad)]) == 2
    capsys.readouterr()


def test_render_epsilon():
    from fractions import Fraction

    assert render_epsilon(Fraction(1, 10**10)) == "1e-10"
    assert render_epsilon(Fraction(3, 1000)) == "0.003"
    assert render_epsilon(Fraction(1)) == "1"


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "rzsynth", "--theta", "pi/128", "--digits", "10", "--json", "--verify"],
        capture_output=True, text=True, check=True,
    )
    rep = json.loads(out.stdout)
    assert rep["verified"] is True and rep["tcount"] == 102
