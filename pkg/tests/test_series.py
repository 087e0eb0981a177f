from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from vertexforge.scalars import ONE, ZERO, Scalar, parse_scalar
from vertexforge.series import INF, LaurentSeries, PrecisionError, default_trunc, parse_series

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)
scalars = st.builds(Scalar, fractions, fractions)
polys = st.dictionaries(st.integers(-3, 4), scalars, max_size=4).map(LaurentSeries)


def to_sympy(s: LaurentSeries, var):
    return sympy.Add(*[
        (sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator))
        * var**e
        for e, c in s.coeffs.items()
    ])


def sympy_coeff(expr, var, e):
    c = sympy.expand(expr * var**10).coeff(var, e + 10)
    re, im = sympy.Rational(sympy.re(c)), sympy.Rational(sympy.im(c))
    return Scalar(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))


@pytest.mark.parametrize(
    "text, re, im",
    [("3/2", Fraction(3, 2), 0), ("-i", 0, -1), ("1+2i", 1, 2), ("(1-3/2i)", 1, Fraction(-3, 2)), ("2i", 0, 2)],
)
def test_parse_scalar(text, re, im):
    assert parse_scalar(text) == Scalar(re, im)


@pytest.mark.parametrize("bad", ["", "abc", "1/0x", "i2"])
def test_parse_scalar_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad)


def test_gaussian_arithmetic():
    i = Scalar(0, 1)
    assert i * i == -ONE
    assert (ONE + i) * (ONE - i) == Scalar(2)
    assert (Scalar(3, 4) / Scalar(3, 4)) == ONE
    assert not ZERO
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


@given(scalars, scalars, scalars)
def test_scalar_field_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


@given(polys, polys, polys)
def test_series_ring_laws(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


@given(polys, polys)
def test_product_matches_sympy(f, g):
    z = sympy.Symbol("z")
    expr = sympy.expand(to_sympy(f, z) * to_sympy(g, z))
    prod = f * g
    for e in range(-6, 9):
        assert prod.coeff(e) == sympy_coeff(expr, z, e)


@given(polys, st.integers(0, 4))
def test_taylor_matches_shift(f, k):
    """``taylor(k)`` is the x^k coefficient of f(z + x)."""
    z, x = sympy.symbols("z x")
    shifted = to_sympy(f, z).subs(z, z + x)
    # negative powers of z + x expand in non-negative powers of x
    series = sympy.series(shifted, x, 0, k + 1).removeO() if f.coeffs and min(f.coeffs) < 0 else sympy.expand(shifted)
    want = sympy.expand(series).coeff(x, k)
    got = f.taylor(k)
    for e in range(-10, 6):
        assert got.coeff(e) == sympy_coeff(want, z, e)


def test_parse_series_and_caps():
    s = parse_series("z^-1 + 3/2*z^2 + O(z^5)")
    assert s.coeff(-1) == ONE and s.coeff(2) == Scalar(Fraction(3, 2))
    assert s.cap == 5
    with pytest.raises(PrecisionError):
        s.coeff(5)
    assert parse_series("(1+2i)*xi^3").coeff(3) == Scalar(1, 2)
    assert parse_series("1+z").cap == INF


def test_truncated_product_cap():
    f = parse_series("z^-1 + 1 + O(z^3)")
    g = parse_series("z^2 + O(z^4)")
    h = f * g
    # cap = min(val f + cap g, val g + cap f) = min(3, 5)
    assert h.cap == 3
    assert h.coeff(1) == ONE and h.coeff(2) == ONE
    assert not parse_series("O(z^2)").is_exact


def test_default_trunc_env(monkeypatch):
    monkeypatch.delenv("VERTEXFORGE_TRUNC", raising=False)
    assert default_trunc() == 16
    monkeypatch.setenv("VERTEXFORGE_TRUNC", "9")
    assert default_trunc() == 9
    monkeypatch.setenv("VERTEXFORGE_TRUNC", "nine")
    with pytest.raises(ValueError):
        default_trunc()


def test_spec_style_precision_example():
    f = LaurentSeries({-1: 1, 0: 1}, cap=3)
    g = LaurentSeries({-1: 1}, cap=5)
    h = f * g
    assert h.cap == 2
    assert h.coeffs == {-2: ONE, -1: ONE}
    assert (parse_series("z^-1") * parse_series("z")) == LaurentSeries.one()
    assert parse_series("1+z") + parse_series("-1") == parse_series("z")


def test_derivative_and_residue():
    assert parse_series("z^3").derivative() == parse_series("3*z^2")
    assert parse_series("z^-1").derivative() == parse_series("-z^-2")
    assert parse_series("5").derivative().is_exact_zero
    assert parse_series("z^-1").residue() == ONE
    assert parse_series("z^2 + 3*z^-1").residue() == Scalar(3)
    assert parse_series("z^2").residue() == ZERO


@pytest.mark.parametrize(
    "text, want",
    [("z^2", ["z^2", "2*z", "1"]), ("z^-1", ["z^-1", "-z^-2", "z^-3"]), ("7", ["7", "0", "0"])],
)
def test_shift_expansion(text, want):
    ex = parse_series(text).shift(2)
    assert [ex[k] for k in range(3)] == [parse_series(w) for w in want]
