import pytest
from hypothesis import given
from hypothesis import strategies as st

from vertexforge.currents import BETA, COPY, CTILDE, PLAIN, elliptic_p
from vertexforge.lie import sl2
from vertexforge.modules import build_module
from vertexforge.scalars import Scalar
from vertexforge.series import parse_series


def vcheck(level=1, beta=0):
    return build_module("Vcheck", sl2(), elliptic_p(beta), level)


def mhat(level=1, beta=0):
    return build_module("Mhat", sl2(), elliptic_p(beta), level)


@pytest.mark.parametrize("make", [vcheck, mhat])
def test_reference_actions(make):
    M = make(level=3)
    assert M.apply_element(M.algebra.parse("e@0"), M.parse_vector("f@-1*1")) == M.parse_vector("h@-1*1")
    assert M.apply_element(M.algebra.parse("e@1"), M.parse_vector("f@-1*1")) == M.vacuum(3)
    for n in range(4):
        for s, i in M.creation_key_types():
            assert not M.apply_key((n, s, i), M.vacuum())


def test_copied_pair_gives_p_times_level():
    V = vcheck(level=2, beta="1/2")
    got = V.apply_element(V.algebra.parse("e^1@1"), V.parse_vector("f^1@-1*1"))
    assert got == V.vacuum(elliptic_p("1/2") * Scalar(2))


def test_mhat_half_level_term():
    M = mhat(level=4)
    got = M.apply_element(M.algebra.parse("e^1@0"), M.parse_vector("f^1@-1*1"))
    assert got == M.vacuum(2)


def test_vkl_and_vf_actions():
    K = build_module("VKl", level=2)
    # [bt_1, bt_-1] = l * ct_{-1}, and ct_{-1} creates
    assert K.apply_key((1, BETA, 0), K.parse_vector("bt@-1*1")) == K.parse_vector("2*ct@-1*1")
    Vf = build_module("Vf", level=1, f="1+z")
    g = parse_series("t^2 - 1")
    assert Vf.apply_key((-1, CTILDE, 0), Vf.vacuum(g)) == Vf.vacuum(g * parse_series("1+t"))
    assert not Vf.apply_key((0, CTILDE, 0), Vf.parse_vector("bt@-2*1"))


def test_fock_rejects_negative_valuation():
    with pytest.raises(ValueError):
        build_module("Fock", level=1, f="z^-1")
    build_module("Fock", level=0, f="z^-1")


def test_translation_operator():
    V = vcheck()
    assert not V.apply_D(V.vacuum())
    assert V.apply_D(V.parse_vector("e@-1*1")) == V.parse_vector("e@-2*1")
    assert V.apply_D(V.parse_vector("(z)*e@-1*1")) == V.parse_vector("e@-1*1 + (z)*e@-2*1")
    with pytest.raises(ValueError):
        mhat().apply_D(mhat().vacuum())


def test_restrictedness_bounds():
    V = vcheck()
    assert V.restrictedness_bound(PLAIN, "e", V.vacuum())["bound"] == 0
    r = V.restrictedness_bound(COPY, "e", V.parse_vector("f^1@-1*1"))
    assert r["bound"] <= 3
    assert not V.apply_key((r["bound"], COPY, 0), V.parse_vector("f^1@-1*1"))
    v = V.parse_vector("f@-3*1")
    r = V.restrictedness_bound(PLAIN, "e", v)
    # e(3) f(-3) 1 = 3 l 1 is the last nonzero mode
    assert r["bound"] == 4
    assert V.apply_key((3, PLAIN, 0), v) == V.vacuum(3)


def test_pbw_basis_is_sorted():
    V = vcheck()
    basis = V.pbw_basis(2)
    assert len(basis) == 1 + 12 + 78
    assert basis[0] == ()
    assert all(list(m) == sorted(m) for m in basis)


def test_parse_vector_forms():
    V = vcheck()
    a = V.parse_vector("2*e@-1*1 + h@-1*1")
    b = V.parse_vector("h@-1 1 + e@-1 1 + e@-1 1")
    assert a == b
    assert V.parse_vector("(1+z^2)*f^1@-1 h@-1 1") == V.parse_vector("f^1@-1 h@-1 1").scale(parse_series("1+z^2"))
    with pytest.raises(ValueError):
        V.parse_vector("e@-1")


keys = st.tuples(st.integers(-3, 3), st.sampled_from([PLAIN, COPY]), st.integers(0, 2))
words = st.lists(st.tuples(st.integers(-3, -1), st.sampled_from([PLAIN, COPY]), st.integers(0, 2)), max_size=3)


@given(keys, keys, words, st.sampled_from([0, 1, -2]), st.sampled_from(["hat", "check"]))
def test_module_law(k1, k2, word, level, kind):
    """u(m) v(n) w - v(n) u(m) w equals [u(m), v(n)] w."""
    M = mhat(level) if kind == "hat" else vcheck(level)
    w = M.monomial(word)
    lhs = M.apply_key(k1, M.apply_key(k2, w)) - M.apply_key(k2, M.apply_key(k1, w))
    terms, central = M.algebra.bracket_keys(k1, k2)
    rhs = M.zero()
    for key, c in dict(terms).items():
        rhs = rhs + M.apply_key(key, w).scale(c)
    rhs = rhs + w.scale(M.coerce(central) * M.level)
    assert lhs == rhs


def test_module_law_detects_wrong_level():
    M = mhat(level=1)
    M.level = Scalar(2)  # action still uses level 1 internally
    w = M.vacuum()
    k1, k2 = (1, PLAIN, 0), (-1, PLAIN, 2)
    lhs = M.apply_key(k1, M.apply_key(k2, w)) - M.apply_key(k2, M.apply_key(k1, w))
    rhs = M.apply_element(M.algebra.bracket(M.algebra.parse("e@1"), M.algebra.parse("f@-1")), w)
    assert lhs != rhs
