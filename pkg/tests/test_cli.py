import json
import subprocess
import sys

import pytest

from extpow.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out.err


def test_rep_transvection_lists_the_three_factors(capsys):
    code, doc, _ = run(capsys, "rep", "--n", "5", "--m", "3", "--transvection", "1,3", "--ring", "Q")
    assert code == 0 and doc["schema"] == 1
    assert doc["factors"] == [
        {"row": "124", "col": "234", "value": "-xi"},
        {"row": "125", "col": "235", "value": "-xi"},
        {"row": "145", "col": "345", "value": "xi"},
    ]
    assert doc["matrix"]["ring"] == "poly(Q; xi)" and doc["nnz"] == 13


def test_rep_torus_and_identity(capsys):
    code, doc, _ = run(capsys, "rep", "--n", "5", "--m", "4", "--torus", "2")
    assert code == 0 and doc["diagonal"] == ["xi", "xi", "xi", "1", "xi"]
    code, doc, _ = run(capsys, "rep", "--n", "3", "--m", "2", "--matrix", "identity")
    assert code == 0 and doc["diagonal"] == ["1", "1", "1"] and doc["nnz"] == 3


def test_rep_numeric_xi_reports_residue(capsys):
    code, doc, _ = run(capsys, "rep", "--n", "6", "--m", "3", "--transvection", "2,5", "--xi", "3", "--ring", "F7")
    assert code == 0 and doc["residue"] == 6


def test_rep_matrix_file_and_dense_storage(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"rows": [[1, 2, 0], [0, 1, 0], [0, 0, 1]]}))
    code, doc, _ = run(capsys, "rep", "--n", "3", "--m", "2", "--matrix", str(path), "--storage", "dense")
    assert code == 0
    assert doc["matrix"]["entries"] == [["1", "0", "0"], ["0", "1", "2"], ["0", "0", "1"]]


def test_rep_word(capsys):
    code, doc, _ = run(capsys, "rep", "--n", "4", "--m", "2", "--word", "1,2:1;2,1:-1;1,2:1", "--ring", "Z")
    # t12(1) t21(-1) t12(1) is a signed permutation matrix
    assert code == 0 and doc["nnz"] == 6


@pytest.mark.parametrize("argv", [
    ["verify", "--kind", "plucker", "--n", "5", "--m", "2", "--ring", "Q", "--samples", "20"],
    ["verify", "--kind", "form", "--n", "6", "--m", "2", "--ring", "Z/5", "--samples", "20"],
    ["verify", "--kind", "ideal", "--n", "7", "--m", "2", "--ring", "F5", "--samples", "10"],
])
def test_verify_examples_pass(capsys, argv):
    code, doc, _ = run(capsys, *argv)
    assert code == 0 and doc["pass"] and len(doc["samples"]) == int(argv[-1])


def test_verify_form_lambda_column_is_det(capsys):
    _, doc, _ = run(capsys, "verify", "--kind", "form", "--n", "6", "--m", "2", "--ring", "Z/5", "--samples", "5")
    assert all(r["lambda"] == r["det"] for r in doc["samples"])


def test_verify_ideal_reports_lambdas(capsys):
    _, doc, _ = run(capsys, "verify", "--kind", "ideal", "--n", "7", "--m", "2", "--ring", "F5", "--samples", "3")
    assert all(len(r["lambdas"]) == 7 and "lambdas_all_units" in r for r in doc["samples"])


@pytest.mark.parametrize("mode,dim,bound", [("extended", 36, 36), ("plain", 35, 35)])
def test_liedim_examples(capsys, mode, dim, bound):
    code, doc, _ = run(capsys, "liedim", "--n", "6", "--m", "2", "--field", "Q", "--mode", mode)
    assert code == 0 and (doc["dimension"], doc["bound"], doc["pass"]) == (dim, bound, True)


def test_liedim_ideal(capsys):
    code, doc, _ = run(capsys, "liedim", "--n", "7", "--m", "2", "--field", "F3", "--mode", "ideal")
    assert code == 0 and doc["dimension"] <= 49 and doc["pass"]


def test_normalizer_examples(capsys):
    code, doc, _ = run(capsys, "normalizer", "--n", "6", "--m", "2", "--ring", "Z/5", "--samples", "4", "--seed", "7")
    assert code == 0 and doc["consistent"] and doc["counts"]["planted"] == 3
    assert {r["kind"] for r in doc["samples"]} == {"positive", "negative", "planted"}
    code, doc, _ = run(capsys, "normalizer", "--n", "6", "--m", "2", "--ring", "Z/5", "--samples", "0")
    assert code == 0 and doc["samples"] == [] and doc["pass"]


@pytest.mark.parametrize("argv", [
    ["rep", "--n", "4", "--m", "5", "--torus", "1"],
    ["rep", "--n", "4", "--m", "2", "--transvection", "2,2"],
    ["rep", "--n", "4", "--m", "2"],
    ["rep", "--n", "4", "--m", "2", "--torus", "1", "--ring", "Z/1"],
    ["verify", "--kind", "form", "--n", "7", "--m", "2"],
    ["verify", "--kind", "ideal", "--n", "6", "--m", "2"],
    ["liedim", "--n", "6", "--m", "2", "--field", "Z/6"],
    ["normalizer", "--n", "6", "--m", "2", "--samples", "-1"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_bad_thread_count_is_usage_error(capsys, monkeypatch):
    monkeypatch.setenv("EXTPOW_THREADS", "zero")
    assert main(["verify", "--kind", "form", "--n", "6", "--m", "2", "--samples", "1"]) == 2


def test_indeterminate_exit_3_with_per_prime_split(capsys):
    argv = ["verify", "--kind", "plucker", "--n", "6", "--m", "3", "--ring", "Z/6", "--samples", "2"]
    assert main(argv) == 3
    code, doc, _ = run(capsys, *argv, "--per-prime")
    assert code == 3 and doc["pass"] is None
    assert doc["per_prime"] == {"2": {"pass": True}, "3": {"pass": True}}


def test_failed_check_exits_1(capsys, monkeypatch):
    import extpow.cli as cli

    monkeypatch.setattr(cli, "stabilizes_plucker", lambda g, ps: False)
    code, doc, _ = run(capsys, "verify", "--kind", "plucker", "--n", "5", "--m", "2", "--samples", "2")
    assert code == 1 and doc["pass"] is False


def test_output_file_and_pretty_keep_content(capsys, tmp_path):
    out = tmp_path / "r.json"
    argv = ["verify", "--kind", "form", "--n", "6", "--m", "2", "--ring", "Z/5", "--samples", "3", "--seed", "9"]
    assert main(argv + ["--output", str(out)]) == 0
    assert capsys.readouterr().out == ""
    _, pretty, _ = run(capsys, *argv, "--pretty")
    assert json.loads(out.read_text()) == pretty
    assert list(pretty) == ["schema", "command", "params", "samples", "pass"]


def test_module_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "extpow", "normalizer", "--n", "6", "--m", "2", "--ring", "Q",
            "--samples", "2", "--seed", "5"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True, env={"EXTPOW_THREADS": "3", "PATH": ""}).stdout
    assert a == b and a.startswith(b'{"schema":1')
