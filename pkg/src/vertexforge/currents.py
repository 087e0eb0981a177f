"""Current-type Lie algebras as bracket engines.

Five families live here:

* ``HfContext``   -- H(f): generators beta_n and a central c.
* ``KlContext``   -- K(l): generators bt_n (beta tilde) and central ct_n.
* ``KgpContext``  -- K(g,p): series-coefficient currents modulo the image of
  ``d = d/dxi + d/dt`` on the central part.
* ``AffineContext`` with ``kind="hat"``   -- the algebra over C with
  polynomial p, scalar coefficients.
* ``AffineContext`` with ``kind="check"`` -- its C((z))-deformation, with
  coefficients in C((z)) and p(z + x) replacing p(x).

Generators are addressed by keys ``(mode, sector, index)``; sorting keys
gives the canonical term order.  Mode-level brackets follow from the
generating-function relations through the delta-function rules

    c(x2) X(x2) x2^-1 delta(x1/x2)        ->  sum_j c_j X(m+n+j)
    c(x2) k d/dx2 x2^-1 delta(x1/x2)      ->  m c_{-m-n} k
    c(x2) k x2^-1 delta(x1/x2)            ->  c_{-m-n-1} k

where ``[a(m), b(n)]`` is the coefficient of ``x1^{-m-1} x2^{-n-1}``.  The
module ``oracle`` re-derives the same numbers by brute-force expansion.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from .lie import LieAlgebraSpec, LieElement
from .scalars import ONE, ZERO, Scalar, as_scalar
from .series import INF, LaurentSeries, PrecisionError, parse_series

__all__ = [
    "PLAIN",
    "COPY",
    "BETA",
    "CTILDE",
    "CurrentElement",
    "AffineContext",
    "HfContext",
    "KlContext",
    "KgpContext",
    "DRReduction",
    "reduce_mod_dR",
    "elliptic_p",
    "parse_descriptor",
]

PLAIN = 0
COPY = 1
# Heisenberg-type families reuse the sector slot
BETA = 0
CTILDE = 1

HALF = Scalar(Fraction(1, 2))


def elliptic_p(beta) -> LaurentSeries:
    """The cubic ``z^3 - 2*beta*z^2 + z``."""
    beta = as_scalar(beta)
    return LaurentSeries({3: ONE, 2: beta * -2, 1: ONE})


def _add_into(d: dict, key, value):
    if not value:
        return
    if key in d:
        s = d[key] + value
        if s:
            d[key] = s
        else:
            del d[key]
    else:
        d[key] = value


class CurrentElement:
    """Finite sum of generator terms plus a central part.

    ``terms`` maps ``(mode, sector, index)`` to a coefficient (a Scalar, or
    a LaurentSeries for the series-coefficient families).  ``central`` is the
    coefficient of the canonical central element; for K(g,p) it is a dict
    ``mode -> series in xi`` standing for ``sum f_n(xi) k (x) t^n``.
    """

    __slots__ = ("ctx", "terms", "central")

    def __init__(self, ctx, terms=None, central=None):
        self.ctx = ctx
        t = {}
        for key, c in (terms or {}).items():
            _add_into(t, tuple(key), ctx.coerce(c))
        self.terms = t
        if ctx.tag == "Kgp":
            cen = {}
            for n, c in (central or {}).items():
                _add_into(cen, int(n), ctx.coerce(c))
            self.central = cen
        else:
            self.central = ctx.coerce(central) if central is not None else ctx.zero_coef

    @classmethod
    def _raw(cls, ctx, terms, central):
        obj = object.__new__(cls)
        obj.ctx = ctx
        obj.terms = terms
        obj.central = central
        return obj

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, CurrentElement):
            return NotImplemented
        t = dict(self.terms)
        for k, v in other.terms.items():
            _add_into(t, k, v)
        if self.ctx.tag == "Kgp":
            cen = dict(self.central)
            for k, v in other.central.items():
                _add_into(cen, k, v)
        else:
            cen = self.central + other.central
        return CurrentElement._raw(self.ctx, t, cen)

    def __neg__(self):
        t = {k: -v for k, v in self.terms.items()}
        if self.ctx.tag == "Kgp":
            cen = {k: -v for k, v in self.central.items()}
        else:
            cen = -self.central
        return CurrentElement._raw(self.ctx, t, cen)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "CurrentElement":
        """Multiply by a Scalar (or, for series families, a series)."""
        if isinstance(s, (int, Fraction)):
            s = as_scalar(s)
        t = {}
        for k, v in self.terms.items():
            _add_into(t, k, v * s)
        if self.ctx.tag == "Kgp":
            cen = {}
            for k, v in self.central.items():
                _add_into(cen, k, v * s)
        else:
            cen = self.central * s
        return CurrentElement._raw(self.ctx, t, cen)

    __rmul__ = scale

    def is_zero(self) -> bool:
        if self.terms:
            return False
        if self.ctx.tag == "Kgp":
            return not self.central
        return not self.central

    def __eq__(self, other):
        if not isinstance(other, CurrentElement):
            return NotImplemented
        return self.terms == other.terms and self.central == other.central

    __hash__ = None

    # -- display ------------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items())

    def __str__(self):
        return self.ctx.format_element(self)

    __repr__ = __str__

    def to_json(self):
        return self.ctx.element_json(self)


# -- coefficient formatting helpers -----------------------------------------------------


def _coef_prefix(c, var="z"):
    """Render a coefficient for ``coef*generator`` display; '' for 1."""
    if isinstance(c, LaurentSeries):
        if c.is_constant():
            c = c.constant_value()
        else:
            return f"({c.to_string(var)})*"
    if c == 1:
        return ""
    if c == -1:
        return "-"
    if not c.is_real and c.re:
        return f"({c})*"
    return f"{c}*"


def _join(parts):
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _coef_json(c):
    if isinstance(c, LaurentSeries):
        return c.to_json()
    return str(c)


# =============================================================================
#  g-hat_p and g-check_p
# =============================================================================


class AffineContext:
    """Bracket engine for the polynomial-p current algebra.

    ``kind="hat"``: coefficients are Scalars and the copied-copied bracket
    uses the coefficients ``p_j`` of ``p(x)``.

    ``kind="check"``: coefficients are series in z and the same slot holds
    ``P_j(z) = p^{(j)}(z)/j!``, the coefficient of ``x^j`` in ``p(z+x)``.
    The bracket is C((z))-bilinear.
    """

    def __init__(self, base: LieAlgebraSpec, p, kind: str = "hat"):
        if kind not in ("hat", "check"):
            raise ValueError(f"kind must be 'hat' or 'check', not {kind!r}")
        if isinstance(p, str):
            p = parse_series(p)
        elif not isinstance(p, LaurentSeries):
            p = LaurentSeries.constant(p)
        if not p.is_polynomial():
            raise ValueError(f"p must be an exact polynomial, got {p}")
        self.base = base
        self.p = p
        self.kind = kind
        self.tag = "hat_gp" if kind == "hat" else "check_gp"
        self.deg_p = max(p.degree, 0) if p.coeffs else -1
        if kind == "hat":
            self.pj = [p.coeff(j) for j in range(self.deg_p + 1)]
            self.zero_coef = ZERO
            self.one_coef = ONE
        else:
            self.pj = [p.taylor(j) for j in range(self.deg_p + 1)]
            self.zero_coef = LaurentSeries.zero()
            self.one_coef = LaurentSeries.one()
        self._bracket_keys = lru_cache(maxsize=None)(self._bracket_keys_uncached)

    @classmethod
    def elliptic(cls, base, beta, kind="hat"):
        return cls(base, elliptic_p(beta), kind)

    def coerce(self, c):
        if self.kind == "hat":
            if isinstance(c, LaurentSeries):
                return c.constant_value()
            return as_scalar(c)
        if isinstance(c, LaurentSeries):
            return c
        if isinstance(c, str):
            return parse_series(c)
        return LaurentSeries.constant(c)

    # -- constructors -------------------------------------------------------
    def gen(self, sector: int, index, mode: int, coef=None) -> CurrentElement:
        if isinstance(index, str):
            index = self.base.index[index]
        c = self.one_coef if coef is None else self.coerce(coef)
        return CurrentElement._raw(self, {(mode, sector, index): c} if c else {}, self.zero_coef)

    def k(self, coef=None) -> CurrentElement:
        c = self.one_coef if coef is None else self.coerce(coef)
        return CurrentElement._raw(self, {}, c)

    def zero(self) -> CurrentElement:
        return CurrentElement._raw(self, {}, self.zero_coef)

    def current(self, sector: int, a: LieElement, mode: int, coef=None) -> CurrentElement:
        """``coef * a (x) t^mode`` in the given sector, a in g."""
        c = self.one_coef if coef is None else self.coerce(coef)
        terms = {}
        for i, ai in a.sparse.items():
            _add_into(terms, (mode, sector, i), c * ai)
        return CurrentElement._raw(self, terms, self.zero_coef)

    # -- brackets -----------------------------------------------------------
    def _bracket_keys_uncached(self, k1, k2):
        """``[u(m), v(n)]`` for basis keys: returns (terms dict, central)."""
        m, sx, i = k1
        n, sy, j = k2
        base = self.base
        br = base.bracket_basis(i, j)
        form = base.form_basis(i, j)
        terms: dict = {}
        central = self.zero_coef
        if sx == PLAIN and sy == PLAIN:
            for k, c in br.items():
                terms[(m + n, PLAIN, k)] = self.one_coef * c if self.kind == "check" else c
            if form and m + n == 0:
                central = self.one_coef * (form * m)
        elif sx != sy:
            for k, c in br.items():
                terms[(m + n, COPY, k)] = self.one_coef * c if self.kind == "check" else c
        else:
            for deg, pj in enumerate(self.pj):
                if not pj:
                    continue
                for k, c in br.items():
                    _add_into(terms, (m + n + deg, PLAIN, k), pj * c)
            s = -m - n
            if form and 0 <= s <= self.deg_p and (m - n):
                central = self.pj[s] * (form * Fraction(m - n, 2))
        return terms, central

    def bracket_keys(self, k1, k2):
        return self._bracket_keys(k1, k2)

    def bracket_modes(self, sector_x, a, m, sector_y, b, n) -> CurrentElement:
        """``[a^{sx}(m), b^{sy}(n)]`` for a, b in g (LieElement or basis name)."""
        if isinstance(a, str):
            a = self.base.basis(a)
        if isinstance(b, str):
            b = self.base.basis(b)
        return self.bracket(self.current(sector_x, a, m), self.current(sector_y, b, n))

    def bracket(self, x: CurrentElement, y: CurrentElement) -> CurrentElement:
        terms: dict = {}
        central = self.zero_coef
        for k1, c1 in x.terms.items():
            for k2, c2 in y.terms.items():
                t, cen = self._bracket_keys(k1, k2)
                cc = c1 * c2
                for k, v in t.items():
                    _add_into(terms, k, cc * v)
                if cen:
                    central = central + cc * cen
        return CurrentElement._raw(self, terms, central)

    # -- derivation and filtration (check only) ---------------------------------
    def derivation(self, x: CurrentElement) -> CurrentElement:
        """``f u (x) t^n -> f' u (x) t^n - n f u (x) t^{n-1}``, ``f k -> f' k``."""
        if self.kind != "check":
            raise ValueError("the derivation is defined on the C((z)) algebra only")
        terms: dict = {}
        for (n, s, i), c in x.terms.items():
            _add_into(terms, (n, s, i), c.derivative())
            if n:
                _add_into(terms, (n - 1, s, i), c * (-n))
        return CurrentElement._raw(self, terms, x.central.derivative())

    def filtration_degree(self, x: CurrentElement):
        """Largest n with x in the n-th filtration piece (``inf`` for 0)."""
        deg = INF
        if x.terms:
            deg = min(k[0] for k in x.terms)
        if x.central:
            deg = min(deg, 0)
        return deg

    # -- display ------------------------------------------------------------
    def key_name(self, key) -> str:
        mode, sector, idx = key
        name = self.base.basis_names[idx]
        return f"{name}^1({mode})" if sector == COPY else f"{name}({mode})"

    def format_element(self, x: CurrentElement) -> str:
        parts = [_coef_prefix(c) + self.key_name(k) for k, c in x.sorted_terms()]
        if x.central:
            parts.append(_coef_prefix(x.central) + "k")
        return _join(parts)

    def element_json(self, x: CurrentElement):
        return {
            "terms": [
                {
                    "mode": k[0],
                    "sector": "copy" if k[1] == COPY else "plain",
                    "base": self.base.basis_names[k[2]],
                    "coef": _coef_json(c),
                }
                for k, c in x.sorted_terms()
            ],
            "central": _coef_json(x.central),
        }

    def parse(self, text: str) -> CurrentElement:
        return parse_descriptor(self, text)


# =============================================================================
#  H(f) and K(l)
# =============================================================================


class HfContext:
    """H(f): ``[beta_m, beta_n] = (m-n)/2 * f_{-m-n} * c`` with c central."""

    tag = "Hf"
    zero_coef = ZERO
    one_coef = ONE

    def __init__(self, f):
        if isinstance(f, str):
            f = parse_series(f)
        elif not isinstance(f, LaurentSeries):
            f = LaurentSeries.constant(f)
        self.f = f

    def coerce(self, c):
        return as_scalar(c)

    def beta(self, n: int, coef=ONE) -> CurrentElement:
        c = as_scalar(coef)
        return CurrentElement._raw(self, {(n, BETA, 0): c} if c else {}, ZERO)

    def c(self, coef=ONE) -> CurrentElement:
        return CurrentElement._raw(self, {}, as_scalar(coef))

    def zero(self):
        return CurrentElement._raw(self, {}, ZERO)

    def bracket_value(self, m: int, n: int) -> Scalar:
        """The scalar multiplying c in ``[beta_m, beta_n]``."""
        if m == n:
            return ZERO
        return self.f.coeff(-m - n) * Fraction(m - n, 2)

    def bracket_keys(self, k1, k2):
        return {}, self.bracket_value(k1[0], k2[0])

    def bracket_modes(self, m: int, n: int) -> CurrentElement:
        return self.c(self.bracket_value(m, n))

    def bracket(self, x, y):
        central = ZERO
        for k1, c1 in x.terms.items():
            for k2, c2 in y.terms.items():
                central = central + c1 * c2 * self.bracket_value(k1[0], k2[0])
        return CurrentElement._raw(self, {}, central)

    def key_name(self, key):
        return f"beta({key[0]})"

    def format_element(self, x):
        parts = [_coef_prefix(c) + self.key_name(k) for k, c in x.sorted_terms()]
        if x.central:
            parts.append(_coef_prefix(x.central) + "c")
        return _join(parts)

    def element_json(self, x):
        return {
            "terms": [{"mode": k[0], "gen": "beta", "coef": str(c)} for k, c in x.sorted_terms()],
            "central": str(x.central),
        }

    def parse(self, text):
        return parse_descriptor(self, text)


class KlContext:
    """K(l): ``[bt_m, bt_n] = (l/2)(m-n) ct_{m+n-1}``, the ct_n central.

    Keys are ``(n, BETA, 0)`` for bt_n and ``(n, CTILDE, 0)`` for ct_n.
    ``central`` is unused (always zero): the ct_n are ordinary central basis
    vectors carried as terms.
    """

    tag = "Kl"
    zero_coef = ZERO
    one_coef = ONE

    def __init__(self, level):
        self.level = as_scalar(level)

    def coerce(self, c):
        return as_scalar(c)

    def bt(self, n: int, coef=ONE) -> CurrentElement:
        c = as_scalar(coef)
        return CurrentElement._raw(self, {(n, BETA, 0): c} if c else {}, ZERO)

    def ct(self, n: int, coef=ONE) -> CurrentElement:
        c = as_scalar(coef)
        return CurrentElement._raw(self, {(n, CTILDE, 0): c} if c else {}, ZERO)

    def zero(self):
        return CurrentElement._raw(self, {}, ZERO)

    def bracket_keys(self, k1, k2):
        m, s1, _ = k1
        n, s2, _ = k2
        if s1 == CTILDE or s2 == CTILDE or m == n or not self.level:
            return {}, ZERO
        return {(m + n - 1, CTILDE, 0): self.level * Fraction(m - n, 2)}, ZERO

    def bracket_modes(self, kind_m, kind_n, m: int, n: int) -> CurrentElement:
        s1 = BETA if kind_m in ("bt", BETA) else CTILDE
        s2 = BETA if kind_n in ("bt", BETA) else CTILDE
        t, _ = self.bracket_keys((m, s1, 0), (n, s2, 0))
        return CurrentElement._raw(self, dict(t), ZERO)

    def bracket(self, x, y):
        terms: dict = {}
        for k1, c1 in x.terms.items():
            for k2, c2 in y.terms.items():
                t, _ = self.bracket_keys(k1, k2)
                for k, v in t.items():
                    _add_into(terms, k, c1 * c2 * v)
        return CurrentElement._raw(self, terms, ZERO)

    def derivation(self, x):
        """``d(bt_n) = -n bt_{n-1}`` and ``d(ct_n) = -n ct_{n-1}``."""
        terms: dict = {}
        for (n, s, i), c in x.terms.items():
            if n:
                _add_into(terms, (n - 1, s, i), c * (-n))
        return CurrentElement._raw(self, terms, ZERO)

    def specialize(self, x, f: LaurentSeries, level=None) -> Scalar:
        """Map a central combination of ct_j to a scalar via ``ct_j -> f_{-j-1}``.

        Returns the coefficient such that the H(f) element equals it times c
        (divided by the level when one is given, so brackets compare at c = l).
        """
        total = ZERO
        for (n, s, _), c in x.terms.items():
            if s != CTILDE:
                raise ValueError("only central ct-terms can be specialised")
            total = total + c * f.coeff(-n - 1)
        if level is not None:
            total = total / as_scalar(level)
        return total

    def key_name(self, key):
        n, s, _ = key
        return f"bt({n})" if s == BETA else f"ct({n})"

    def format_element(self, x):
        return _join([_coef_prefix(c) + self.key_name(k) for k, c in x.sorted_terms()])

    def element_json(self, x):
        return {
            "terms": [
                {"mode": k[0], "gen": "bt" if k[1] == BETA else "ct", "coef": str(c)}
                for k, c in x.sorted_terms()
            ]
        }

    def parse(self, text):
        return parse_descriptor(self, text)


# =============================================================================
#  K(g, p) and the dR reduction
# =============================================================================


class DRReduction:
    """Obstruction record for a central element ``sum_n f_n(xi) k t^n`` modulo dR.

    The monomial ``xi^a t^n`` has weight ``s = a + n`` and ``d`` lowers the
    weight by one, so membership splits by weight.  For each weight the
    triangular recurrence ``(a+1) h_{a+1} + (s+1-a) h_a = g_a`` (``g_a`` the
    coefficient of ``xi^a t^{s-a}``, ``h`` a preimage of weight s+1) is
    solved from both ends; it can fail only at the singular indices
    ``a = -1`` and ``a = s+1``.  ``obstructions`` records the residuals there:
    ``{s: (lower, upper)}`` for ``s >= -1`` and ``{s: (lower,)}`` for
    ``s <= -2``.  Only nonzero residuals are stored.

    ``window`` is the exclusive upper bound on certified weights: every
    weight below it was fully known.  ``None`` means exact input.
    """

    __slots__ = ("obstructions", "window", "preimage")

    def __init__(self, obstructions, window, preimage):
        self.obstructions = obstructions
        self.window = window
        self.preimage = preimage

    @property
    def is_zero(self) -> bool:
        return not self.obstructions

    def __bool__(self):
        return not self.is_zero

    def to_json(self):
        return {
            "zero": self.is_zero,
            "obstructions": {
                str(s): [str(v) for v in vals] for s, vals in sorted(self.obstructions.items())
            },
            "certified_below_weight": None if self.window is None else self.window,
        }

    def __repr__(self):
        return f"DRReduction(zero={self.is_zero}, obstructions={self.to_json()['obstructions']}, window={self.window})"


def reduce_mod_dR(central: dict, require_window=None) -> DRReduction:
    """Decide membership of ``sum_n f_n(xi) k t^n`` in ``d(R)``.

    ``central`` maps the t-mode n to a LaurentSeries in xi.  Weights at or
    above the certified window are skipped; pass ``require_window`` to demand
    certification of every weight below that value (raises PrecisionError
    otherwise).
    """
    window = INF
    slices: dict = {}
    for n, f in central.items():
        if f.cap != INF:
            window = min(window, f.cap + n)
        for a, c in f.coeffs.items():
            s = a + n
            slices.setdefault(s, {})
            slices[s][a] = slices[s].get(a, ZERO) + c
    if require_window is not None and window < require_window:
        raise PrecisionError(
            f"truncation certifies weights below {window}, but {require_window} was requested"
        )
    obstructions = {}
    preimage = {}
    for s, g in slices.items():
        if s >= window:
            continue
        g = {a: c for a, c in g.items() if c}
        if not g:
            continue
        res, h = _solve_weight(s, g)
        if any(res):
            obstructions[s] = tuple(res)
        for a, c in h.items():
            if c:
                preimage[(a, s + 1 - a)] = c
    return DRReduction(obstructions, None if window == INF else int(window), preimage)


def _solve_weight(s: int, g: dict):
    """Solve ``(a+1) h_{a+1} + (s+1-a) h_a = g_a`` with finitely supported h.

    Returns (residuals, h).  ``h`` maps a to the coefficient of
    ``xi^a t^{s+1-a}`` in a preimage of the solvable part.
    """
    lo, hi = min(g), max(g)
    h: dict = {}
    get = lambda a: g.get(a, ZERO)  # noqa: E731
    if s >= -1:
        # lower region: h vanishes below lo; sweep up to h_{-1}
        for a in range(min(lo, -1), -1):
            # equation at a determines h_{a+1}
            rhs = get(a) - h.get(a, ZERO) * (s + 1 - a)
            h[a + 1] = rhs / (a + 1)
        lower = get(-1) - h.get(-1, ZERO) * (s + 2)
        # upper region: h vanishes above hi + 1; sweep down to h_{s+2}
        for a in range(max(hi, s + 1), s + 1, -1):
            rhs = get(a) - h.get(a + 1, ZERO) * (a + 1)
            h[a] = rhs / (s + 1 - a)
        upper = get(s + 1) - h.get(s + 2, ZERO) * (s + 2)
        # middle block 0..s+1: choose h_0 = 0 and sweep up
        h[0] = ZERO
        for a in range(0, s + 1):
            rhs = get(a) - h[a] * (s + 1 - a)
            h[a + 1] = rhs / (a + 1)
        return [lower, upper], h
    if s == -2:
        for a in range(min(lo, -1), -1):
            rhs = get(a) - h.get(a, ZERO) * (s + 1 - a)
            h[a + 1] = rhs / (a + 1)
        for a in range(max(hi, 0), -1, -1):
            rhs = get(a) - h.get(a + 1, ZERO) * (a + 1)
            h[a] = rhs / (s + 1 - a)
        return [get(-1)], h
    # s < -2: singular points s+1 < -1
    for a in range(min(lo, s + 1), s + 1):
        rhs = get(a) - h.get(a, ZERO) * (s + 1 - a)
        h[a + 1] = rhs / (a + 1)
    # the equation at a = s+1 fixes h_{s+2}
    h[s + 2] = get(s + 1) / (s + 2)
    for a in range(s + 2, -1):
        rhs = get(a) - h.get(a, ZERO) * (s + 1 - a)
        h[a + 1] = rhs / (a + 1)
    lower = get(-1) - h.get(-1, ZERO) * (s + 2)
    for a in range(max(hi, 0), -1, -1):
        rhs = get(a) - h.get(a + 1, ZERO) * (a + 1)
        h[a] = rhs / (s + 1 - a)
    return [lower], h


def apply_d(h: dict) -> dict:
    """``d = d/dxi + d/dt`` on ``{(a, n): c}`` meaning ``sum c xi^a t^n``."""
    out: dict = {}
    for (a, n), c in h.items():
        if a:
            _add_into(out, (a - 1, n), c * a)
        if n:
            _add_into(out, (a, n - 1), c * n)
    return out


class KgpContext:
    """K(g,p): currents ``f(xi) u (x) t^n`` with f in C((xi)), modulo J0.

    The bracket is only C-bilinear: the central part involves ``f'``.  The
    central part of an element is kept unreduced as ``{n: f_n(xi)}``; use
    :meth:`central_obstruction` (i.e. :func:`reduce_mod_dR`) to compare
    central parts modulo dR.
    """

    tag = "Kgp"

    def __init__(self, base: LieAlgebraSpec, p):
        if isinstance(p, str):
            p = parse_series(p)
        elif not isinstance(p, LaurentSeries):
            p = LaurentSeries.constant(p)
        self.base = base
        self.p = p
        self.dp = p.derivative()
        self.zero_coef = LaurentSeries.zero()
        self.one_coef = LaurentSeries.one()

    def coerce(self, c):
        if isinstance(c, LaurentSeries):
            return c
        if isinstance(c, str):
            return parse_series(c)
        return LaurentSeries.constant(c)

    def gen(self, sector, index, mode, coef=None) -> CurrentElement:
        if isinstance(index, str):
            index = self.base.index[index]
        c = self.one_coef if coef is None else self.coerce(coef)
        return CurrentElement._raw(self, {(mode, sector, index): c} if c else {}, {})

    def k(self, mode: int, coef=None) -> CurrentElement:
        c = self.one_coef if coef is None else self.coerce(coef)
        return CurrentElement._raw(self, {}, {mode: c} if c else {})

    def zero(self):
        return CurrentElement._raw(self, {}, {})

    def bracket_terms(self, k1, f, k2, g):
        """Bracket of ``f u(m)`` and ``g v(n)``: (terms, central) dicts."""
        m, sx, i = k1
        n, sy, j = k2
        br = self.base.bracket_basis(i, j)
        form = self.base.form_basis(i, j)
        terms: dict = {}
        central: dict = {}
        fg = f * g
        if sx == PLAIN and sy == PLAIN:
            for k, c in br.items():
                _add_into(terms, (m + n, PLAIN, k), fg * c)
            if form:
                _add_into(central, m + n, (f.derivative() * g) * form)
                if m:
                    _add_into(central, m + n - 1, fg * (form * m))
        elif sx != sy:
            for k, c in br.items():
                _add_into(terms, (m + n, COPY, k), fg * c)
        else:
            fgp = fg * self.p
            for k, c in br.items():
                _add_into(terms, (m + n, PLAIN, k), fgp * c)
            if form:
                top = f.derivative() * g * self.p + fg * self.dp * HALF
                _add_into(central, m + n, top * form)
                if m:
                    _add_into(central, m + n - 1, fgp * (form * m))
        return terms, central

    def bracket(self, x, y) -> CurrentElement:
        terms: dict = {}
        central: dict = {}
        for k1, f in x.terms.items():
            for k2, g in y.terms.items():
                t, c = self.bracket_terms(k1, f, k2, g)
                for k, v in t.items():
                    _add_into(terms, k, v)
                for k, v in c.items():
                    _add_into(central, k, v)
        return CurrentElement._raw(self, terms, central)

    def derivation(self, x) -> CurrentElement:
        """``D(u (x) t^n) = -n u (x) t^{n-1}``, u including the k-sector."""
        terms: dict = {}
        for (n, s, i), c in x.terms.items():
            if n:
                _add_into(terms, (n - 1, s, i), c * (-n))
        central: dict = {}
        for n, c in x.central.items():
            if n:
                _add_into(central, n - 1, c * (-n))
        return CurrentElement._raw(self, terms, central)

    def central_obstruction(self, x, require_window=None) -> DRReduction:
        return reduce_mod_dR(x.central, require_window)

    def equal_mod_dR(self, x, y) -> tuple:
        """(terms agree on known coefficients, central difference reduction)."""
        diff = x - y
        terms_ok = all(c.is_zero_to_precision() for c in diff.terms.values())
        return terms_ok, reduce_mod_dR(diff.central)

    def key_name(self, key):
        mode, sector, idx = key
        name = self.base.basis_names[idx]
        return f"{name}^1({mode})" if sector == COPY else f"{name}({mode})"

    def format_element(self, x):
        parts = [_coef_prefix(c, "xi") + self.key_name(k) for k, c in x.sorted_terms()]
        for n, c in sorted(x.central.items()):
            parts.append(_coef_prefix(c, "xi") + f"k({n})")
        return _join(parts)

    def element_json(self, x):
        return {
            "terms": [
                {
                    "mode": k[0],
                    "sector": "copy" if k[1] == COPY else "plain",
                    "base": self.base.basis_names[k[2]],
                    "coef": _coef_json(c),
                }
                for k, c in x.sorted_terms()
            ],
            "central": {str(n): _coef_json(c) for n, c in sorted(x.central.items())},
        }

    def parse(self, text):
        return parse_descriptor(self, text)


# =============================================================================
#  descriptors: "e^1@-1", "2*h@0", "k", "beta@1", "bt@2", "ct@-1"
# =============================================================================

_DESC_RE = re.compile(r"^(?P<name>[A-Za-z_][A-Za-z_0-9]*)(?P<copy>\^1)?(?:@(?P<mode>[+-]?\d+))?$")


def _split_top(text: str):
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > start and text[i - 1] not in "@*^":
            parts.append(text[start:i])
            start = i
    parts.append(text[start:])
    return [p for p in parts if p]


def parse_descriptor(ctx, text: str) -> CurrentElement:
    """Parse a sum of generator descriptors into an element of ``ctx``.

    Each summand is ``[coef*]name[^1]@mode`` or ``[coef*]k[@mode]``.  For the
    series families the coefficient may be a bracketed series literal such as
    ``(z^2+1)*e@0``.
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty generator descriptor")
    total = ctx.zero()
    for part in _split_top(s):
        sign = 1
        body = part
        if body[0] in "+-":
            sign = -1 if body[0] == "-" else 1
            body = body[1:]
        coef_text, _, gen_text = body.rpartition("*")
        m = _DESC_RE.match(gen_text)
        if not m:
            raise ValueError(f"bad generator descriptor {part!r}")
        if coef_text.startswith("(") and coef_text.endswith(")"):
            coef_text = coef_text[1:-1]
        if coef_text:
            coef = ctx.coerce(coef_text) if ctx.tag in ("check_gp", "Kgp") else as_scalar(coef_text)
        else:
            coef = ctx.one_coef
        coef = coef * sign if sign == 1 else -coef
        name = m.group("name")
        copy = COPY if m.group("copy") else PLAIN
        mode = m.group("mode")
        total = total + _make_generator(ctx, name, copy, None if mode is None else int(mode), coef)
    return total


def _make_generator(ctx, name, sector, mode, coef):
    tag = ctx.tag
    if tag in ("hat_gp", "check_gp", "Kgp"):
        if name == "k":
            if tag == "Kgp":
                return ctx.k(-1 if mode is None else mode, coef)
            if mode is not None:
                raise ValueError("k takes no mode in this algebra")
            return ctx.k(coef)
        if name not in ctx.base.index:
            raise ValueError(f"unknown basis element {name!r}; basis is {ctx.base.basis_names}")
        if mode is None:
            raise ValueError(f"generator {name!r} needs a mode, e.g. {name}@-1")
        return ctx.gen(sector, ctx.base.index[name], mode, coef)
    if tag == "Hf":
        if name == "c":
            return ctx.c(coef)
        if name in ("beta", "b") and mode is not None:
            return ctx.beta(mode, coef)
    if tag == "Kl":
        if name in ("bt", "beta") and mode is not None:
            return ctx.bt(mode, coef)
        if name in ("ct", "c") and mode is not None:
            return ctx.ct(mode, coef)
    raise ValueError(f"bad generator {name!r} for algebra {tag}")
