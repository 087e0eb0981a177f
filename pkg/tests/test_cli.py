import json
from pathlib import Path

import pytest

from vertexforge.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "argv, golden",
    [
        (["dump", "bracket-table"], "bracket-table_hat_beta0.txt"),
        (["dump", "pbw-basis", "--depth", "2"], "pbw-basis_vcheck_depth2.txt"),
        (["dump", "locality-matrix"], "locality-matrix_vcheck.txt"),
    ],
)
def test_dump_matches_golden(capsys, argv, golden):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_bracket_table_entry(capsys):
    _, out, _ = run(capsys, "dump", "bracket-table")
    assert "[e(1), f(-1)] = h(0) + k" in out.splitlines()


def test_locality_matrix_bounded():
    rows = (GOLDEN / "locality-matrix_vcheck.txt").read_text().splitlines()[1:]
    assert all(int(x) <= 2 for row in rows for x in row.split()[1:])


def test_check_lie_and_bracket(capsys, tmp_path):
    assert run(capsys, "check-lie")[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"basis": ["e", "h", "f"], "brackets": [[1, 0, ["2", "0", "0"]], [1, 2, ["0", "0", "-2"]], [0, 2, ["0", "1", "0"]]], "form": [["1", "0", "0"], ["0", "2", "0"], ["0", "0", "1"]]}))
    code, out, _ = run(capsys, "check-lie", "--algebra", str(bad), "--json")
    assert code == 1
    assert {c["axiom"]: c["status"] for c in json.loads(out)["checks"]}["invariance"] == "fail"
    code, out, _ = run(capsys, "bracket", "e^1@0", "f^1@-1")
    assert out.strip() == "h(0) + h(2) + 1/2*k"


def test_reduce_dr(capsys):
    code, out, _ = run(capsys, "reduce-dr", "k@0", "--json")
    assert code == 0 and json.loads(out)["zero"] is True
    code, out, _ = run(capsys, "reduce-dr", "k@-1", "--json")
    assert json.loads(out)["zero"] is False


def test_vacuum_build_and_apply(capsys, tmp_path):
    ctx = tmp_path / "ctx.json"
    code, out, _ = run(capsys, "vacuum", "build", "--module", "vcheck", "--level", "2", "--save", str(ctx))
    assert code == 0 and "pbw_monomials_at_depth" in out
    code, out, _ = run(capsys, "vacuum", "apply", "--context", str(ctx), "--op", "e^1@1", "--to", "f^1@-1*1")
    assert out.strip() == "(2*z + 2*z^3)*1"
    code, out, _ = run(capsys, "vacuum", "apply", "--module", "vcheck", "--op", "D", "--to", "(z)*e@-1*1")
    assert out.strip() == "(z)*e(-2) 1 + e(-1) 1"


def test_nth_product_and_y_apply(capsys):
    code, out, _ = run(capsys, "nth-product", "--a", "e^1", "--b", "f^1", "--n", "1", "--level", "3", "--json")
    modes = json.loads(out)["modes"]
    assert modes["-4"] == [{"coef": "3", "monomial": []}] and modes["-2"] == [{"coef": "3", "monomial": []}]
    code, out, _ = run(capsys, "y-apply", "--state", "e@-1*1", "--to", "f@-1*1", "--json")
    terms = json.loads(out)["terms"]
    assert terms["-2"] == [{"coef": {"cap": None, "coeffs": {"0": "1"}}, "monomial": []}]


def test_locality_command(capsys):
    code, out, _ = run(capsys, "locality", "--module", "vcheck", "--a", "e", "--b", "f", "--json")
    assert code == 0 and json.loads(out)["order"] == 2


def test_exit_codes(capsys):
    assert run(capsys, "verify", "nogo")[0] == 0
    assert run(capsys, "verify", "no-such-suite")[0] == 2
    assert run(capsys, "verify", "nogo", "--level", "one")[0] == 2
    assert run(capsys, "bracket", "e@1", "q@2")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["dump", "bracket-table", "--modes", "1-2"])
    assert exc.value.code == 2
    # too little precision is reported, never passed
    code, out, _ = run(capsys, "verify", "kgp-ideal", "--trials", "5", "--trunc", "2")
    assert code == 1 and "precision-limited" in out


def test_trunc_env(capsys, monkeypatch):
    monkeypatch.setenv("VERTEXFORGE_TRUNC", "7")
    _, out, _ = run(capsys, "verify", "filtration", "--json", "--trials", "3")
    assert json.loads(out)["config"]["trunc"] == 7


def test_verify_report_is_byte_stable(capsys):
    argv = ["verify", "module-law", "--trials", "20", "--seed", "11", "--json", "--no-timing"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    _, other, _ = run(capsys, "verify", "module-law", "--trials", "20", "--seed", "12", "--json", "--no-timing")
    assert json.loads(other)["config"]["seed"] == 12
