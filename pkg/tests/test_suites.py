import pytest

from vertexforge import suites
from vertexforge.currents import COPY, AffineContext
from vertexforge.modules import ModuleContext
from vertexforge.suites import SuiteConfig, run_suite, worst_status


def test_worst_status():
    assert worst_status(["pass", "pass"]) == "pass"
    assert worst_status(["pass", "precision-limited"]) == "precision-limited"
    assert worst_status(["precision-limited", "fail", "pass"]) == "fail"


@pytest.mark.parametrize("name", ["jacobi-hatgp", "filtration", "restricted", "nogo", "derivation-checkgp"])
def test_quick_suites_pass(name):
    rep = run_suite(SuiteConfig(name, trials=20), timing=False)
    assert rep["status"] == "pass", rep


def test_reports_are_deterministic():
    cfg = SuiteConfig("jacobi-checkgp", trials=15, seed=3)
    assert run_suite(cfg, timing=False) == run_suite(cfg, timing=False)


def test_oracle_suite_catches_a_wrong_central_term(monkeypatch):
    original = AffineContext._bracket_keys_uncached

    def broken(self, k1, k2):
        terms, central = original(self, k1, k2)
        if k1[1] == COPY and k2[1] == COPY and central:
            central = central * 2
        return terms, central

    monkeypatch.setattr(AffineContext, "_bracket_keys_uncached", broken)
    rep = run_suite(SuiteConfig("oracle"), timing=False)
    assert rep["status"] == "fail"
    failing = [c["name"] for c in rep["checks"] if c["status"] == "fail"]
    assert failing and all("witnesses" in c for c in rep["checks"] if c["status"] == "fail")


def test_module_law_catches_a_wrong_level(monkeypatch):
    original = ModuleContext.apply_element

    def broken(self, x, v):
        out = original(self, x, v)
        if self.algebra.tag != "Kl" and x.central and self.level:
            out = out + v.scale(self.coerce(x.central))
        return out

    monkeypatch.setattr(ModuleContext, "apply_element", broken)
    rep = run_suite(SuiteConfig("module-law", trials=30), timing=False)
    assert rep["status"] == "fail"


def test_polynomial_product_catches_a_wrong_polynomial(monkeypatch):
    real = suites.build_module
    monkeypatch.setattr(suites, "build_module", lambda kind, base, p, level: real(kind, base, suites.elliptic_p(1), level))
    rep = run_suite(SuiteConfig("lpoly"), timing=False)
    status = {c["name"].split("[")[0]: c["status"] for c in rep["checks"]}
    assert status["polynomial-product"] == "fail"
    # the third product only involves the multiplier, not the module
    assert status["polynomial-third-product"] == "pass"
