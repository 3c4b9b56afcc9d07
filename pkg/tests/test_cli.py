import json
import os

import pytest

from gksiegel.cli import main
from gksiegel.corpus import gen_corpus
from gksiegel.matrices import global_discriminant, load_matrix

from lift_support import genuine_table_path


def write(tmp_path, name, two_b):
    path = tmp_path / name
    path.write_text(json.dumps({"n": len(two_b), "two_b": two_b}))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gk_command(tmp_path, capsys):
    m = write(tmp_path, "diag139.json", [[2, 0, 0], [0, 6, 0], [0, 0, 18]])
    code, out, _ = run(capsys, "gk", "--prime", "3", "--matrix", m)
    assert code == 0
    assert out.splitlines()[0] == "(0,1,2)"
    code, out, _ = run(capsys, "gk", "--prime", "3", "--matrix", m, "--json")
    assert json.loads(out)["ledger"] == [0, 0, 3]


def test_siegel_both(tmp_path, capsys):
    m = write(tmp_path, "b3.json", [[6]])
    code, out, _ = run(capsys, "siegel", "--prime", "3", "--matrix", m, "--method", "both")
    obj = json.loads(out)
    assert code == 0 and obj["equal"] and obj["F"] == [1, 3] and obj["S"] == [1, 2, -3]


def test_missing_form_exit_1(tmp_path, capsys):
    m = write(tmp_path, "b.json", [[2, 0], [0, 2]])
    code, _, err = run(capsys, "lift", "coeff", "--form", "missing.json", "--matrix", m)
    assert code == 1 and "missing.json" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["gk", "--prime", "4", "--matrix", "x.json"],
        ["gk", "--prime", "3"],
        ["negk", "eval", "--a", "1,1", "--eps", "1,0"],
        ["--budget", "0", "negk", "eval", "--a", "1", "--eps", "1"],
    ],
)
def test_validation_errors_exit_1(argv, capsys):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err


def test_bad_matrix_exit_1(tmp_path, capsys):
    m = write(tmp_path, "odd.json", [[1, 0], [0, 2]])
    code, _, err = run(capsys, "gk", "--prime", "2", "--matrix", m)
    assert code == 1 and "half-integral" in err


def test_budget_exit_2(tmp_path, capsys):
    m = write(tmp_path, "d.json", [[2, 0], [0, 8]])
    code, _, err = run(capsys, "--budget", "10", "siegel", "--prime", "2", "--matrix", m, "--method", "oracle")
    assert code == 2 and "budget" in err


def test_budget_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("GKSIEGEL_BUDGET", "10")
    m = write(tmp_path, "d.json", [[2, 0], [0, 8]])
    code, _, _ = run(capsys, "siegel", "--prime", "2", "--matrix", m, "--method", "oracle")
    assert code == 2


def test_attach_command(tmp_path, capsys):
    m = write(tmp_path, "d.json", [[2, 0], [0, 2]])
    code, out, _ = run(capsys, "attach", "--prime", "2", "--matrix", m, "--verify")
    obj = json.loads(out)
    assert code == 0 and obj["datum"] == "(0,1; 1,0)" and obj["method"] == "forced" and obj["oracle"] == [1]


def test_negk_commands(capsys):
    code, out, _ = run(capsys, "negk", "eval", "--a", "2", "--eps", "1", "--q", "3", "--x", "1", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["G"] == "1 + X + X^2" and obj["value_at_x"] == "QuadExt(3)"
    code, out, _ = run(capsys, "negk", "check", "--count", "4", "--max-n", "3", "--max-a", "3", "--seed", "2", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["violations"] == 0 and obj["checks"] == 4 * 3 * 2


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "0.1.0" in capsys.readouterr().out


def test_corpus_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "corpus", "--seed", "1", "--count", "10", "--n", "2", "--out", str(a))[0] == 0
    assert run(capsys, "--threads", "3", "corpus", "--seed", "1", "--count", "10", "--n", "2", "--out", str(b))[0] == 0
    names = sorted(os.listdir(a))
    assert len(names) == 10 and names == sorted(os.listdir(b))
    for f in names:
        assert (a / f).read_bytes() == (b / f).read_bytes()
    mats = [load_matrix(str(a / f)) for f in names]
    assert any(global_discriminant(B).fB > 1 for B in mats)


def test_corpus_always_has_conductor():
    for seed in range(1, 8):
        for n in (2, 4):
            assert any(global_discriminant(B).fB > 1 for B in gen_corpus(seed, 10, n))


@pytest.mark.skipif(genuine_table_path() is None, reason="no genuine eigenform table")
def test_lift_commands(tmp_path, capsys):
    form = genuine_table_path()
    m = write(tmp_path, "d14.json", [[2, 0], [0, 8]])
    code, out, _ = run(capsys, "lift", "coeff", "--form", form, "--matrix", m)
    assert code == 0 and json.loads(out)["value"] == "-1056"
    d = tmp_path / "mats"
    run(capsys, "corpus", "--seed", "4", "--count", "6", "--n", "2", "--bound", "4", "--out", str(d))
    out1 = tmp_path / "r1.csv"
    out2 = tmp_path / "r2.csv"
    assert run(capsys, "lift", "bounds", "--form", form, "--matrices", str(d), "--out", str(out1))[0] == 0
    assert run(capsys, "--threads", "1", "lift", "bounds", "--form", form, "--matrices", str(d), "--out", str(out2))[0] == 0
    text = out1.read_text()
    assert text == out2.read_text()
    lines = text.splitlines()
    assert lines[0].startswith("matrix-id,det2B,dB,fB,c,hecke,bk,thm31,thm32,thm641,thm642,maass-status")
    assert len(lines) == 7
