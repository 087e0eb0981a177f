from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vertexforge.currents import (
    COPY,
    PLAIN,
    AffineContext,
    HfContext,
    KgpContext,
    KlContext,
    elliptic_p,
    reduce_mod_dR,
)
from vertexforge.lie import sl2
from vertexforge.oracle import affine_bracket_oracle, hf_bracket_oracle, kl_bracket_oracle
from vertexforge.scalars import Scalar
from vertexforge.series import LaurentSeries, parse_series

HALF = Scalar(Fraction(1, 2))


@pytest.fixture(scope="module")
def hat():
    return AffineContext(sl2(), elliptic_p(0), "hat")


@pytest.fixture(scope="module")
def check():
    return AffineContext(sl2(), elliptic_p(0), "check")


def test_elliptic_polynomial():
    assert elliptic_p(Fraction(1, 2)) == parse_series("z^3 - z^2 + z")


def test_hat_reference_brackets(hat):
    assert hat.bracket(hat.parse("e@1"), hat.parse("f@-1")) == hat.parse("h@0 + k")
    assert hat.bracket(hat.parse("e^1@0"), hat.parse("f^1@-1")) == hat.parse("h@2 + h@0 + 1/2*k")
    # plain against copied: [a,b]^1 with no central term
    assert hat.bracket(hat.parse("e@2"), hat.parse("f^1@-3")) == hat.parse("h^1@-1")
    assert hat.format_element(hat.bracket(hat.parse("e@1"), hat.parse("f@-1"))) == "h(0) + k"


def test_check_copied_central_term(check):
    b = check.bracket(check.parse("e^1@1"), check.parse("f^1@-1"))
    assert b.central == elliptic_p(0)


def test_check_derivation(check):
    x = check.parse("(z)*e@2")
    assert check.derivation(x) == check.parse("e@2 - (2*z)*e@1")
    assert check.derivation(check.parse("(z^3)*k")) == check.parse("(3*z^2)*k")


def test_filtration_degree(check):
    assert check.filtration_degree(check.parse("e@5")) == 5
    assert check.filtration_degree(check.parse("(1+z)*k")) == 0
    assert check.filtration_degree(check.parse("e@2 + f^1@-1")) == -1


def test_hf_brackets():
    ctx = HfContext(parse_series("1"))
    assert ctx.bracket(ctx.parse("beta@1"), ctx.parse("beta@-1")) == ctx.c()
    assert ctx.bracket(ctx.parse("beta@0"), ctx.parse("beta@0")).is_zero
    # f = z: the relevant coefficient f_{-1} vanishes
    z_ctx = HfContext(parse_series("z"))
    assert z_ctx.bracket_value(1, 0) == Scalar(0)
    assert hf_bracket_oracle(parse_series("z"), 1, 0) == Scalar(0)


def test_kl_brackets():
    ctx = KlContext(2)
    assert ctx.bracket(ctx.parse("bt@1"), ctx.parse("bt@0")) == ctx.ct(0)  # (l/2) ct_0 with l = 2
    assert ctx.bracket(ctx.parse("bt@1"), ctx.parse("bt@-1")) == ctx.ct(-1, Scalar(2))
    assert ctx.bracket(ctx.parse("ct@3"), ctx.parse("bt@-2")).is_zero
    assert ctx.bracket(ctx.parse("bt@2"), ctx.parse("bt@2")).is_zero
    assert ctx.derivation(ctx.parse("bt@3")) == ctx.bt(2, Scalar(-3))


keys = st.tuples(st.integers(-4, 4), st.sampled_from([PLAIN, COPY]), st.integers(0, 2))


@given(keys, keys, st.sampled_from(["0", "1/2", "3"]), st.sampled_from(["hat", "check"]))
def test_affine_closed_form_matches_delta_oracle(k1, k2, beta, kind):
    ctx = AffineContext(sl2(), elliptic_p(Fraction(beta)), kind)
    assert _same(ctx.bracket_keys(k1, k2), affine_bracket_oracle(ctx, k1, k2))


def _same(a, b):
    ta, ca = a
    tb, cb = b
    ta = {k: v for k, v in dict(ta).items() if v}
    tb = {k: v for k, v in dict(tb).items() if v}
    return ta == tb and ca == cb


@given(st.integers(-5, 5), st.integers(-5, 5), st.sampled_from(["1", "1+z", "z^2", "z^-1+2*z"]))
def test_hf_matches_oracle(m, n, f):
    f = parse_series(f)
    assert HfContext(f).bracket_value(m, n) == hf_bracket_oracle(f, m, n)


@given(st.integers(-5, 5), st.integers(-5, 5), st.sampled_from(["0", "1", "-2", "1/3"]))
def test_kl_matches_oracle(m, n, level):
    ctx = KlContext(Scalar(Fraction(level)))
    got = ctx.bracket(ctx.bt(m), ctx.bt(n))
    want = kl_bracket_oracle(ctx.level, m, n)
    assert {k[0]: c for k, c in got.terms.items()} == want


# -- K(g, p) ------------------------------------------------------------------------


@pytest.fixture(scope="module")
def kgp():
    return KgpContext(sl2(), elliptic_p(0))


def test_kgp_central_part(kgp):
    f, g = parse_series("xi^2 + 1"), parse_series("xi")
    x = kgp.gen(PLAIN, "e", 2, f)
    y = kgp.gen(PLAIN, "f", -1, g)
    b = kgp.bracket(x, y)
    want = {1: f.derivative() * g, 0: f * g * Scalar(2)}
    assert b.central == want
    assert kgp.bracket(kgp.k(3, f), y).is_zero


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2))
def test_kgp_skew_defect_in_dR(m, n, i, j):
    kgp = KgpContext(sl2(), elliptic_p(0))
    x = kgp.gen(PLAIN, i, m, parse_series("xi^2 - 3*xi^-1 + 1"))
    y = kgp.gen(COPY, j, n, parse_series("2*xi + xi^3"))
    z = kgp.gen(PLAIN, j, n, parse_series("xi^-2 + 5"))
    for u, v in ((x, y), (x, z), (y, y)):
        ok, red = kgp.equal_mod_dR(kgp.bracket(u, v), -kgp.bracket(v, u))
        assert ok and red.is_zero


def test_dR_reduction_examples():
    assert reduce_mod_dR({0: LaurentSeries.one()}).is_zero
    assert not reduce_mod_dR({-1: LaurentSeries.one()}).is_zero
    f = parse_series("xi^3 - 2*xi^-2 + 7")
    for n in (-2, 0, 3):
        assert reduce_mod_dR({n: f.derivative(), n - 1: f * n}).is_zero
