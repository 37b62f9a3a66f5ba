import csv
import math
import io
import json

import pytest

from fhlab import acceptance, cli
from fhlab.acceptance import SMOOTH_TAU, SZEGO_TAU
from fhlab.symbols import SymbolSpec, load_symbol
from fhlab.toeplitz import SingularMatrix

from importlib.resources import files

CONFIGS = files("fhlab") / "configs"
JUMP = '{"beta": [0.3, 0]}'


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_trivial_symbol(capsys):
    code, out, _ = run(capsys, "sweep", "--symbol", '{"beta": 0}', "--dyadic", "8:64", "--no-meta")
    assert code == 0
    table = rows(out)
    assert [r["n"] for r in table] == ["8", "16", "32", "64"]
    assert list(table[0]) == ["n", "logabs_det", "arg_det", "logabs_pred", "arg_pred",
                              "ratio_minus_one_re", "ratio_minus_one_im"]
    assert all(float(r["ratio_minus_one_re"]) == 0 for r in table)


def test_oracle_and_det_agree(capsys):
    _, a, _ = run(capsys, "oracle", "--symbol", JUMP, "--n", "8", "--no-meta")
    _, b, _ = run(capsys, "det", "--symbol", JUMP, "--n", "8", "--no-meta")
    assert float(rows(a)[0]["logabs_det"]) == pytest.approx(float(rows(b)[0]["logabs_det"]), abs=1e-10)


def test_seventeen_digits_and_determinism(capsys, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for path in (out1, out2):
        code, _, _ = run(capsys, "sweep", "--symbol", JUMP, "--n-list", "16,32", "--format", "json",
                         "--no-meta", "--out", str(path))
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert "meta" not in doc and len(doc["rows"]) == 2
    _, out, _ = run(capsys, "coeffs", "--symbol", JUMP, "--n", "1", "--no-meta")
    text = rows(out)[1]["sigma_re"]
    assert float(text) == pytest.approx(math.sin(0.3 * math.pi) / (0.3 * math.pi), rel=1e-15)
    assert len(text.lstrip("0.")) == 17


def test_meta_header(capsys):
    _, out, _ = run(capsys, "det", "--symbol", JUMP, "--n", "3", "--format", "json")
    meta = json.loads(out)["meta"]
    assert meta["command"] == "det" and meta["symbol"]["beta"] == [0.3, 0.0]


@pytest.mark.parametrize("cmd", ["constants", "fit", "jacobi", "corner", "ulemma", "limset", "spectrum", "kernel"])
def test_every_command_runs(capsys, cmd):
    sizes = {"fit": ["--dyadic", "32:256"], "jacobi": ["--n", "10"], "corner": ["--n-list", "16,32"],
             "ulemma": [], "limset": ["--n-list", "16,32"], "spectrum": ["--n", "8"], "constants": [],
             "kernel": []}[cmd]
    code, out, err = run(capsys, cmd, "--symbol", '{"beta": [0.2, 0.05]}', *sizes, "--no-meta")
    assert code == 0, err
    assert len(rows(out)) >= 1


def test_spectrum_functionals(capsys):
    code, out, _ = run(capsys, "spectrum", "--symbol", JUMP, "--n", "16", "--functional", "abs2;pow1", "--no-meta")
    assert code == 0
    assert [r["functional"] for r in rows(out)] == ["abs2", "pow1"]


def test_config_errors(capsys):
    assert run(capsys, "det", "--symbol", '{"bet": 1}', "--n", "3")[0] == 1
    assert run(capsys, "det", "--n", "3")[0] == 1
    assert run(capsys, "det", "--symbol", "/nonexistent.json", "--n", "3")[0] == 1
    assert run(capsys, "det", "--symbol", JUMP, "--n-list", "8,4")[0] == 1
    code, _, err = run(capsys, "oracle", "--symbol", str(CONFIGS / "smooth_complex.json"), "--n", "3")
    assert code == 1 and "configuration error" in err


def test_numerical_failure_exit_code(capsys, monkeypatch):
    # beta = 1 is a bad configuration for the Jacobi check, not a numerical failure
    assert run(capsys, "jacobi", "--symbol", str(CONFIGS / "nilpotent.json"), "--n", "5")[0] == 1

    def singular(spec, args):
        raise SingularMatrix("T_5 is singular")

    monkeypatch.setitem(cli.HANDLERS, "det", singular)
    code, _, err = run(capsys, "det", "--symbol", JUMP, "--n", "5")
    assert code == 2 and "numerical failure" in err


def test_verify_exit_codes(capsys, monkeypatch):
    monkeypatch.setattr(acceptance, "CRITERIA", {"X1": (lambda: (True, "ok"), None)})
    assert run(capsys, "verify")[0] == 0
    monkeypatch.setattr(acceptance, "CRITERIA", {"X1": (lambda: (True, "ok"), None),
                                                 "X2": (lambda: (False, "no"), None)})
    code, out, _ = run(capsys, "verify")
    assert code == 3
    assert out.splitlines()[1].startswith("X2 FAIL")


def test_shipped_configs_match_acceptance_symbols():
    assert load_symbol(str(CONFIGS / "smooth_complex.json")) == SymbolSpec(0.3 + 0.2j, SMOOTH_TAU)
    assert load_symbol(str(CONFIGS / "szego_laurent.json")) == SymbolSpec(0, SZEGO_TAU)
    assert load_symbol(str(CONFIGS / "pure_jump_1p3.json")) == SymbolSpec(1.3)
