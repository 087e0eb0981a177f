from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vertexforge.currents import COPY, PLAIN, elliptic_p
from vertexforge.lie import sl2
from vertexforge.modules import build_module
from vertexforge.scalars import Scalar
from vertexforge.series import parse_series
from vertexforge.vertex import (
    Derivative,
    Field,
    Identity,
    Multiplier,
    borcherds_defect,
    commutator_sum_oracle,
    heisenberg_map,
    locality_order,
    nth_product,
    skew_symmetry_defect,
    type_zero_map,
    vertex_operator_map,
)

E, H, F = 0, 1, 2


def modules(level=1, beta=0):
    p = elliptic_p(beta)
    return build_module("Vcheck", sl2(), p, level), build_module("Mhat", sl2(), p, level)


def probes(M):
    return [M.vacuum()] + [M.monomial([(-1, s, i)]) for s, i in M.creation_key_types()] + [
        M.monomial([(-2, COPY, E), (-1, PLAIN, F)])
    ]


def same_modes(A, B, vs, lo=-6, hi=4):
    return all(A.mode(m, v) == B.mode(m, v) for v in vs for m in range(lo, hi + 1))


@pytest.mark.parametrize("level, beta", [(1, 0), (3, Fraction(1, 2)), (1, Fraction(1, 2)), (3, 0)])
def test_polynomial_product(level, beta):
    _, M = modules(level, beta)
    vs = probes(M)
    p = elliptic_p(beta)
    prod = nth_product(Field(M, COPY, E), Field(M, COPY, F), 1)
    assert same_modes(prod, Multiplier(M, p * Scalar(level)), vs)
    third = nth_product(Multiplier(M, p), Identity(M), -3)
    assert same_modes(third, Multiplier(M, parse_series("3*x") - parse_series("2*x^0") * Scalar(beta)), vs)


def test_identity_products():
    _, M = modules()
    A = Field(M, PLAIN, H)
    vs = probes(M)
    assert same_modes(nth_product(A, Identity(M), -1), A, vs)
    for n in range(3):
        assert all(not nth_product(A, Identity(M), n).mode(m, v) for v in vs for m in range(-5, 5))


@given(
    st.sampled_from([(PLAIN, E), (COPY, E), (PLAIN, H), (COPY, F)]),
    st.sampled_from([(PLAIN, F), (COPY, F), (COPY, H)]),
    st.integers(0, 3),
    st.integers(-4, 3),
    st.integers(0, 7),
)
def test_nth_product_matches_finite_commutator_sum(a, b, n, m, idx):
    V, _ = modules(level=2, beta=Fraction(1, 2))
    A, B = Field(V, *a), Field(V, *b)
    v = probes(V)[idx]
    assert nth_product(A, B, n).mode(m, v) == commutator_sum_oracle(A, B, n, m, v)


@pytest.mark.parametrize("which", [0, 1])
def test_locality_orders(which):
    M = modules()[which]
    vs = probes(M)
    order = lambda a, b: locality_order(Field(M, *a), Field(M, *b), vs, 6, (-2, 2))[0]
    assert order((PLAIN, E), (PLAIN, F)) == 2
    assert order((COPY, E), (COPY, F)) == 2
    assert order((PLAIN, E), (PLAIN, E)) == 0
    assert order((PLAIN, E), (COPY, F)) == 1
    assert order((PLAIN, H), (COPY, H)) == 0


def test_level_zero_drops_double_pole():
    M = build_module("Mhat", sl2(), elliptic_p(0), 0)
    assert locality_order(Field(M, PLAIN, E), Field(M, PLAIN, F), probes(M), 6, (-2, 2))[0] == 1


def test_translation_obstruction():
    """D of the polynomial product is l <e,f> p'(x), nonzero exactly when l != 0."""
    for level in (0, 1):
        _, M = modules(level)
        prod = nth_product(Field(M, COPY, E), Field(M, COPY, F), 1)
        want = Multiplier(M, elliptic_p(0).derivative() * Scalar(level))
        assert same_modes(Derivative(prod), want, probes(M))


def test_vertex_operator_axioms():
    V, _ = modules()
    Y = vertex_operator_map(V)
    for w in probes(V):
        assert Y.Y(V.vacuum()).apply(w, -3, 3) == {0: w}
    for s, i in V.creation_key_types():
        u = V.monomial([(-1, s, i)])
        assert Y.Y(u).mode(-1, V.vacuum()) == u
        assert all(not Y.Y(u).mode(n, V.vacuum()) for n in range(0, 4))
        assert same_modes(Y.Y(u), Field(V, s, i), probes(V))


def test_shift_rule_on_scalars():
    V, _ = modules()
    Y = vertex_operator_map(V)
    f, g = parse_series("z^2 + 3*z^-1"), parse_series("1 - z")
    got = Y.Y(V.vacuum(f)).apply(V.vacuum(g), -6, -1)
    for k in range(6):
        assert got.get(k, V.zero()) == V.vacuum(f.taylor(k) * g)


def test_type_zero_rule():
    V, M = modules()
    YW = type_zero_map(V, M)
    f = parse_series("2 + z - z^3")
    w = M.parse_vector("f^1@-1 h@-2 1")
    got = YW.Y(V.vacuum(f)).apply(w, -6, -1)
    assert got == {e: w.scale(c) for e, c in f.coeffs.items()}


def test_commutator_transfer_values():
    V, _ = modules(level=2, beta=Fraction(1, 2))
    Y = vertex_operator_map(V)
    e, f = V.parse_vector("e@-1*1"), V.parse_vector("f@-1*1")
    e1, f1 = V.parse_vector("e^1@-1*1"), V.parse_vector("f^1@-1*1")
    assert Y.Y(e).mode(0, f) == V.parse_vector("h@-1*1")
    assert Y.Y(e).mode(1, f) == V.vacuum(2)
    assert Y.Y(e).mode(0, f1) == V.parse_vector("h^1@-1*1")
    assert not Y.Y(e).mode(1, f1)
    assert Y.Y(e1).mode(1, f1) == V.vacuum(elliptic_p(Fraction(1, 2)) * Scalar(2))


states = st.sampled_from(["e@-1*1", "f^1@-1*1", "(1+z)*h@-2*1", "e^1@-1 f@-1 1", "(z^2)*1"])


@given(states, states, states, st.integers(-3, 1), st.integers(-3, 1), st.integers(-2, 2))
def test_borcherds_on_vacuum_module(u, v, w, p, q, r):
    V, _ = modules(level=1, beta=Fraction(1, 2))
    Y = vertex_operator_map(V)
    u, v, w = (V.parse_vector(s) for s in (u, v, w))
    assert not borcherds_defect(Y, Y, u, v, w, p, q, r)


@given(states, states, st.integers(-3, 2))
def test_skew_symmetry(u, v, m):
    V, _ = modules(level=1)
    Y = vertex_operator_map(V)
    assert not skew_symmetry_defect(Y, V.parse_vector(u), V.parse_vector(v), m)


def test_borcherds_detects_wrong_target():
    """Y_W built over a module with a different p must break the identity."""
    V, _ = modules(level=1, beta=0)
    _, wrong = modules(level=1, beta=Fraction(1, 2))
    Y, YW = vertex_operator_map(V), type_zero_map(V, wrong)
    u, v = V.parse_vector("e^1@-1*1"), V.parse_vector("f^1@-1*1")
    w = wrong.vacuum()
    assert any(
        borcherds_defect(Y, YW, u, v, w, p, q, r)
        for p in range(-3, 2)
        for q in range(-3, 2)
        for r in range(-1, 3)
    )


def test_heisenberg_chain():
    for f in ("1", "1+z"):
        K = build_module("VKl", level=1)
        Vf = build_module("Vf", level=1, f=f)
        fock = build_module("Fock", level=1, f=f)
        YK, YVf = heisenberg_map(K, fock), heisenberg_map(Vf, fock)
        YKsrc, YVfsrc = vertex_operator_map(K), vertex_operator_map(Vf)
        ws = [fock.vacuum(), fock.parse_vector("beta@-1*1"), fock.parse_vector("beta@-2 beta@-1 1")]
        for s1 in ("bt@-1*1", "ct@-1*1", "bt@-2*1"):
            for s2 in ("bt@-1*1", "ct@-2*1"):
                u, v = K.parse_vector(s1), K.parse_vector(s2)
                for w in ws:
                    assert not borcherds_defect(YKsrc, YK, u, v, w, -1, -1, 0)
                    assert not borcherds_defect(YKsrc, YK, u, v, w, 0, -2, 1)
        # type zero on V[f]: f(t) 1 acts as f(x)
        g = parse_series("t^2 + 1")
        got = YVf.Y(Vf.vacuum(g)).apply(ws[1], -4, -1)
        assert got == {e: ws[1].scale(c) for e, c in g.coeffs.items()}
        assert not borcherds_defect(YVfsrc, YVf, Vf.parse_vector("bt@-1*1"), Vf.vacuum(g), ws[2], -1, -1, 0)
