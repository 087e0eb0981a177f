"""Brute-force mode brackets from the generating-function identities.

Nothing here reuses the closed forms of :mod:`currents`.  Each identity is
rebuilt as an explicit finite two-variable expansion (delta function, its
x2-derivative, fields, and polynomial multipliers expanded by the binomial
theorem) and the bracket ``[u(m), v(n)]`` is read off as the coefficient of
``x1^{-m-1} x2^{-n-1}``.  The finite windows are chosen wide enough that the
extracted coefficient is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .scalars import ONE, ZERO, Scalar, as_scalar
from .series import LaurentSeries

__all__ = ["affine_bracket_oracle", "affine_bracket_table_oracle", "hf_bracket_oracle", "kl_bracket_oracle"]

UNIT = "1"


def _acc(d, key, sym, c):
    slot = d.setdefault(key, {})
    if sym in slot:
        slot[sym] = slot[sym] + c
    else:
        slot[sym] = c


def _mul(A: dict, B: dict) -> dict:
    """Product of bivariate expansions whose values are {symbol: coef}.

    At most one factor of each product carries a non-unit symbol.
    """
    out: dict = {}
    for (a1, a2), va in A.items():
        for (b1, b2), vb in B.items():
            key = (a1 + b1, a2 + b2)
            for sa, ca in va.items():
                for sb, cb in vb.items():
                    if sa != UNIT and sb != UNIT:
                        raise ValueError("product of two operator symbols")
                    sym = sb if sa == UNIT else sa
                    _acc(out, key, sym, ca * cb)
    return out


def _add(*parts):
    out: dict = {}
    for P in parts:
        for key, v in P.items():
            for sym, c in v.items():
                _acc(out, key, sym, c)
    return out


def _delta(R):
    """``x2^{-1} delta(x1/x2) = sum_r x1^r x2^{-r-1}`` for |r| <= R."""
    return {(r, -r - 1): {UNIT: ONE} for r in range(-R, R + 1)}


def _d_delta(R):
    """``d/dx2`` of the delta expansion above."""
    return {(r, -r - 2): {UNIT: Scalar(-r - 1)} for r in range(-R, R + 1) if r != -1}


def _field_x2(coeffs_by_mode, N):
    """``X(x2) = sum_j X(j) x2^{-j-1}`` for |j| <= N; coeffs_by_mode(j) -> {sym: c}."""
    out = {}
    for j in range(-N, N + 1):
        v = coeffs_by_mode(j)
        if v:
            out[(0, -j - 1)] = dict(v)
    return out


def _poly_x2(coeffs: dict):
    """A multiplier ``sum_i c_i x2^i`` given as {i: coef}."""
    return {(0, i): {UNIT: c} for i, c in coeffs.items() if c}


def _extract(expansion, m, n):
    return {s: c for s, c in expansion.get((-m - 1, -n - 1), {}).items() if c}


# -- the affine families -------------------------------------------------------------


def _shift_coeffs(p: LaurentSeries, kind: str):
    """x2-coefficients of the multiplier p(x2) (hat) or p(z + x2) (check)."""
    pc = dict(p.coeffs)
    if kind == "hat":
        return {e: c for e, c in pc.items()}
    out = {}
    for e, c in pc.items():
        for i in range(e + 1):
            b = comb(e, i)
            term = LaurentSeries.monomial(e - i, c * b)
            out[i] = out[i] + term if i in out else term
    return out


def _deriv_coeffs(pc: dict):
    return {e - 1: c * e for e, c in pc.items() if e}


def _affine_expansion(ctx, sx, i, sy, j, N):
    """The right side of the generating-function identity for ``[u^{sx}, v^{sy}]``.

    Fields and delta functions are expanded over exponents within N; every
    coefficient ``x1^{-m-1} x2^{-n-1}`` with ``|m| + |n| + deg p + 3 <= N`` is exact.
    """
    base = ctx.base
    kind = ctx.kind
    R = N
    one = ONE if kind == "hat" else LaurentSeries.one()
    br = base.bracket_basis(i, j)
    form = base.form_basis(i, j)

    def ab_field(sector):
        def coeffs(mode):
            return {("g", (mode, sector, k)): one * c for k, c in br.items()}

        return _field_x2(coeffs, N)

    k_sym = {(0, 0): {"k": one * form}}
    if sx == 0 and sy == 0:
        return _add(
            _mul(ab_field(0), _delta(R)),
            _mul(k_sym, _d_delta(R)),
        )
    if sx != sy:
        return _mul(ab_field(1), _delta(R))
    p_coeffs = _shift_coeffs(ctx.p, kind)
    if kind == "hat":
        dp_coeffs = _deriv_coeffs(p_coeffs)
    else:
        dp_coeffs = _shift_coeffs(LaurentSeries(_deriv_coeffs(dict(ctx.p.coeffs))), "check")
    half = Scalar(Fraction(1, 2))
    return _add(
        _mul(_mul(_poly_x2(p_coeffs), ab_field(0)), _delta(R)),
        _mul(_mul(_poly_x2({e: c * half for e, c in dp_coeffs.items()}), k_sym), _delta(R)),
        _mul(_mul(_poly_x2(p_coeffs), k_sym), _d_delta(R)),
    )


def _split(ctx, coeff):
    terms = {sym[1]: c for sym, c in coeff.items() if sym != "k" and c}
    central = coeff.get("k", ctx.zero_coef)
    return terms, central


def _deg(ctx):
    return max(ctx.p.degree, 0) if ctx.p.coeffs else 0


def affine_bracket_oracle(ctx, k1, k2):
    """``[u(m), v(n)]`` for keys ``(mode, sector, index)`` of an AffineContext.

    Returns ``(terms, central)`` in the same shape as ``ctx.bracket_keys``.
    """
    m, sx, i = k1
    n, sy, j = k2
    N = abs(m) + abs(n) + _deg(ctx) + 3
    expansion = _affine_expansion(ctx, sx, i, sy, j, N)
    return _split(ctx, _extract(expansion, m, n))


def affine_bracket_table_oracle(ctx, sx, i, sy, j, M):
    """All ``[u^{sx}_i(m), v^{sy}_j(n)]`` with ``|m|, |n| <= M`` from one expansion."""
    N = 2 * M + _deg(ctx) + 3
    expansion = _affine_expansion(ctx, sx, i, sy, j, N)
    return {
        (m, n): _split(ctx, _extract(expansion, m, n))
        for m in range(-M, M + 1)
        for n in range(-M, M + 1)
    }


# -- Heisenberg-type families -----------------------------------------------------------


def _delta_zw(R):
    """``z^{-1} delta(w/z) = sum_r w^r z^{-r-1}``, keyed (z-exp, w-exp)."""
    return {(-r - 1, r): {UNIT: ONE} for r in range(-R, R + 1)}


def _d_delta_zw(R):
    """``d/dw`` of ``z^{-1} delta(w/z)``."""
    return {(-r - 1, r - 1): {UNIT: Scalar(r)} for r in range(-R, R + 1) if r}


def hf_bracket_oracle(f: LaurentSeries, m: int, n: int) -> Scalar:
    """Coefficient of c in ``[beta_m, beta_n]`` from the defining relation.

    ``[beta(z), beta(w)] = 1/2 f'(w) z^-1 delta(w/z) c + f(w) d/dw z^-1 delta(w/z) c``
    with ``beta(x) = sum beta_n x^{-n-1}``; the bracket of modes is the
    coefficient of ``z^{-m-1} w^{-n-1}``.
    """
    R = abs(m) + abs(n) + 3
    fc = {e: c for e, c in f.coeffs.items()}
    # the needed coefficient is f_{-m-n}; make sure it is known
    f.coeff(-m - n)
    dfc = _deriv_coeffs(fc)
    half = Scalar(Fraction(1, 2))
    f_w = {(0, e): {"c": c} for e, c in fc.items()}
    df_w = {(0, e): {"c": c * half} for e, c in dfc.items()}
    expansion = _add(_mul(df_w, _delta_zw(R)), _mul(f_w, _d_delta_zw(R)))
    got = expansion.get((-m - 1, -n - 1), {})
    return got.get("c", ZERO)


def kl_bracket_oracle(level, m: int, n: int) -> dict:
    """``[bt_m, bt_n]`` as {ct-mode: coef} from the generating-function form.

    ``[bt(z), bt(w)] = l/2 ct'(w) z^-1 delta(w/z) + ct(w) d/dw z^-1 delta(w/z) l``
    where ``ct(w) = sum ct_j w^{-j-1}``.
    """
    level = as_scalar(level)
    R = abs(m) + abs(n) + 3
    N = R + 2
    half = Scalar(Fraction(1, 2))
    ct = {(0, -j - 1): {("ct", j): ONE} for j in range(-N, N + 1)}
    dct = {(0, -j - 2): {("ct", j): Scalar(-j - 1)} for j in range(-N, N + 1) if j != -1}
    expansion = _add(
        _mul({(0, 0): {UNIT: level * half}}, _mul(dct, _delta_zw(R))),
        _mul({(0, 0): {UNIT: level}}, _mul(ct, _d_delta_zw(R))),
    )
    got = expansion.get((-m - 1, -n - 1), {})
    return {sym[1]: c for sym, c in got.items() if c}
