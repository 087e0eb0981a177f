"""One test per acceptance criterion, each run at its stated size and time limit.

Every test prints a single ``[PASS]``/``[FAIL]`` line with its wall time.
"""

import json
import time

import pytest

from vertexforge.cli import main
from vertexforge.lie import sl2
from vertexforge.suites import SuiteConfig, run_suite


@pytest.fixture
def report_line(capsys):
    def emit(number, title, ok, seconds, limit, detail=""):
        verdict = "PASS" if ok and seconds < limit else "FAIL"
        with capsys.disabled():
            print(f"\n[{verdict}] criterion {number}: {title} ({seconds:.1f}s, limit {limit}s){' ' + detail if detail else ''}")

    return emit


def timed(configs):
    start = time.perf_counter()
    reports = [run_suite(cfg, timing=False) for cfg in configs]
    return reports, time.perf_counter() - start


def checks_by_name(reports):
    return {(r["suite"], json.dumps(r["config"], sort_keys=True), c["name"]): c for r in reports for c in r["checks"]}


def all_pass(reports):
    return all(r["status"] == "pass" for r in reports)


def test_criterion_01_lie_axioms(report_line):
    configs = [SuiteConfig(s, beta=b, trials=200) for s in ("jacobi-hatgp", "jacobi-checkgp") for b in ("0", "1/2")]
    reports, dt = timed(configs)
    counts = [c["passed"] for c in checks_by_name(reports).values()]
    ok = all_pass(reports) and counts == [200] * 8
    report_line(1, "antisymmetry + Jacobi, hat and check, beta in {0, 1/2}", ok, dt, 10)
    assert ok and dt < 10


def test_criterion_02_kgp_mod_dR(report_line):
    reports, dt = timed([SuiteConfig("kgp-ideal", trunc=16, trials=100)])
    checks = {c["name"]: c for c in reports[0]["checks"]}
    known = checks["known-members-and-nonmembers"]["info"]
    ok = (
        all_pass(reports)
        and checks["skew-defect-in-dR"]["passed"] == 100
        and checks["jacobi-defect-in-dR"]["passed"] == 100
        and known["k t^-1"]["zero"] is False
        and known["k t^0"]["zero"] is True
    )
    report_line(2, "K(g,p) skew/Jacobi defects in dR, k t^-1 obstructed", ok, dt, 30)
    assert ok and dt < 30


def test_criterion_03_oracle_equivalence(report_line):
    reports, dt = timed([SuiteConfig("oracle")])
    checks = reports[0]["checks"]
    affine = [c for c in checks if c["name"].split("-")[0] in ("hat", "check")]
    # 13 x 13 mode pairs, 2 x 2 sector pairs, 3 x 3 basis pairs
    ok = all_pass(reports) and all(c["passed"] == 13 * 13 * 4 * 9 for c in affine) and len(affine) == 2
    ok = ok and all(c["window"]["modes"] == [-6, 6] for c in checks)
    report_line(3, "closed-form brackets equal delta-expansion oracle, |m|,|n| <= 6", ok, dt, 10)
    assert ok and dt < 10


def test_criterion_04_module_law(report_line):
    reports, dt = timed([SuiteConfig("module-law", level=lvl, trials=200) for lvl in ("0", "1", "-2")])
    names = {c["name"] for r in reports for c in r["checks"]}
    wanted = {"module-law-VKl", "module-law-Vf[f=1]", "module-law-Vf[f=1+z]", "module-law-Vf[f=z^2]", "module-law-Vcheck", "module-law-Mhat"}
    cs = [c for r in reports for c in r["checks"]]
    ok = (
        all_pass(reports)
        and wanted <= names
        and all(c["passed"] == 200 and c["window"]["probe_depth"] == 4 for c in cs)
    )
    report_line(4, "module law on VKl, V[f], Vcheck, Mhat for level 0, 1, -2", ok, dt, 120)
    assert ok and dt < 120


def test_criterion_05_locality_matrix(report_line):
    reports, dt = timed([SuiteConfig("locality", level="1")])
    g = sl2()
    ok = all_pass(reports)
    for chk in reports[0]["checks"]:
        for pair, order in chk["info"]["matrix"].items():
            a, b = pair.split("|")
            same_sector = a.endswith("^1") == b.endswith("^1")
            form = g.form_basis(g.index[a.rstrip("^1")], g.index[b.rstrip("^1")])
            ok = ok and order is not None and order <= 2
            if same_sector and form:
                ok = ok and order == 2
    report_line(5, "locality order <= 2 on Vcheck and Mhat, exactly 2 where <a,b> != 0", ok, dt, 60)
    assert ok and dt < 60


def test_criterion_06_polynomial_product(report_line):
    configs = [SuiteConfig("lpoly", level=lvl, beta=b) for lvl in ("1", "3") for b in ("0", "1/2")]
    reports, dt = timed(configs)
    thirds = {
        r["config"]["beta"]: c["info"]["p(x)_{-3} 1_W"]
        for r in reports
        for c in r["checks"]
        if c["name"].startswith("polynomial-third-product")
    }
    ok = all_pass(reports) and thirds == {"0": "3*x", "1/2": "-1 + 3*x"}
    report_line(6, "e^1_1 f^1 = l p(x) and p(x)_{-3} 1 = 3x - 2 beta", ok, dt, 5)
    assert ok and dt < 5


def test_criterion_07_nogo(report_line):
    reports, dt = timed([SuiteConfig("nogo", level=lvl) for lvl in ("0", "1")])
    obs = {
        r["config"]["level"]: c["info"]["obstruction"]
        for r in reports
        for c in r["checks"]
        if c["name"] == "obstruction-nonzero-iff-level-nonzero"
    }
    ok = all_pass(reports) and obs["0"] == "0" and obs["1"] == "1 + 3*x^2"
    report_line(7, "translation obstruction l <e,f> p'(x) nonzero iff l != 0", ok, dt, 5, f"obstruction at l=1: {obs.get('1')}")
    assert ok and dt < 5


def test_criterion_08_shift_and_type_zero_axioms(report_line):
    reports, dt = timed([SuiteConfig("vertex-algebra", trials=100), SuiteConfig("tmain", trials=100)])
    shift = next(c for c in reports[0]["checks"] if c["name"] == "shift-axiom")
    tzero = next(c for c in reports[1]["checks"] if c["name"] == "type-zero-axiom")
    ok = (
        all_pass(reports)
        and shift["passed"] == 100
        and tzero["passed"] == 100
        and shift["window"]["x_modes"] >= 8
        and shift["window"]["z_exponents_min"] >= 8
        and tzero["window"]["x_modes"] >= 8
        and tzero["window"]["f_known_coefficients_min"] >= 8
        and shift["info"]["nonzero_instances"] == 100
        and tzero["info"]["nonzero_instances"] == 100
    )
    report_line(8, "shift axiom on Vcheck and type-zero axiom on Mhat, 100 each, 8x8 windows", ok, dt, 120)
    assert ok and dt < 120


def test_criterion_09_heisenberg_chain(report_line):
    reports, dt = timed([SuiteConfig(s, level="1") for s in ("hf-modules", "heisenberg")])
    names = [c["name"] for r in reports for c in r["checks"]]
    ok = all_pass(reports)
    for f in ("1", "1 + z"):
        for prefix in ("specialization", "VKl-module-law-on-Fock", "Vf-type-zero-axiom", "Vf-type-zero-module-law"):
            ok = ok and f"{prefix}[f={f}]" in names
    spec = [c for r in reports for c in r["checks"] if c["name"].startswith("specialization")]
    ok = ok and all(c["window"]["modes"] == [-6, 6] and c["passed"] == 169 for c in spec)
    report_line(9, "Fock module: VKl module law, V[f] type zero, specialization |m|,|n| <= 6", ok, dt, 60)
    assert ok and dt < 60


def test_criterion_10_determinism(report_line, capsys):
    start = time.perf_counter()
    outputs = []
    for _ in range(2):
        for argv in (
            ["verify", "kgp-ideal", "--seed", "5", "--json", "--no-timing"],
            ["verify", "module-law", "--seed", "5", "--trials", "50", "--json", "--no-timing"],
            ["verify", "tmain", "--seed", "5", "--trials", "10", "--json", "--no-timing"],
        ):
            main(argv)
            outputs.append(capsys.readouterr().out)
    dt = time.perf_counter() - start
    ok = outputs[:3] == outputs[3:] and all(outputs)
    # with timing on, only the wall_time field may differ
    a = run_suite(SuiteConfig("jacobi-checkgp", seed=9, trials=30))
    b = run_suite(SuiteConfig("jacobi-checkgp", seed=9, trials=30))
    a.pop("wall_time"), b.pop("wall_time")
    ok = ok and json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    report_line(10, "same seed gives byte-identical reports", ok, dt, 600)
    assert ok
