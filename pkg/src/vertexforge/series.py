"""Truncated Laurent series over Q(i) with per-value precision tracking.

A series stores its known coefficients below a precision cap.  Everything at
or above the cap is unknown; ``cap = math.inf`` marks an exact Laurent
polynomial.  Arithmetic propagates caps so that no operation ever reports a
coefficient it could not have known.
"""

from __future__ import annotations

import math
import os
import re
from fractions import Fraction
from math import comb

from .scalars import ONE, ZERO, Scalar, as_scalar, parse_scalar

__all__ = [
    "PrecisionError",
    "LaurentSeries",
    "ShiftExpansion",
    "parse_series",
    "default_trunc",
    "DEFAULT_TRUNC",
    "INF",
]

INF = math.inf
DEFAULT_TRUNC = 16


class PrecisionError(ArithmeticError):
    """Raised when a result would depend on coefficients beyond a cap."""


def default_trunc() -> int:
    """Truncation depth for user-supplied infinite series.

    ``VERTEXFORGE_TRUNC`` overrides the built-in default of 16.
    """
    raw = os.environ.get("VERTEXFORGE_TRUNC")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"VERTEXFORGE_TRUNC must be an integer, got {raw!r}") from None
        if value <= 0:
            raise ValueError("VERTEXFORGE_TRUNC must be positive")
        return value
    return DEFAULT_TRUNC


class LaurentSeries:
    """Element of C((z)) known below ``cap``.

    ``coeffs`` maps exponents to nonzero :class:`Scalar` values.  ``val`` is
    the lowest exponent that might carry a nonzero coefficient: the least
    stored exponent, or ``cap`` when nothing is stored (``inf`` for the exact
    zero series).
    """

    __slots__ = ("_c", "cap", "_hash")

    def __init__(self, coeffs=None, cap=INF):
        if cap != INF:
            cap = int(cap)
        c = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else coeffs
            for e, v in items:
                e = int(e)
                if e >= cap:
                    continue
                v = as_scalar(v)
                if v:
                    c[e] = c[e] + v if e in c else v
                    if not c[e]:
                        del c[e]
        self._c = c
        self.cap = cap
        self._hash = None

    @classmethod
    def _make(cls, c: dict, cap) -> "LaurentSeries":
        # trusted constructor: c holds nonzero Scalars below cap
        obj = object.__new__(cls)
        obj._c = c
        obj.cap = cap
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls) -> "LaurentSeries":
        return _EXACT_ZERO

    @classmethod
    def one(cls) -> "LaurentSeries":
        return _EXACT_ONE

    @classmethod
    def constant(cls, c) -> "LaurentSeries":
        c = as_scalar(c)
        return cls._make({0: c} if c else {}, INF)

    @classmethod
    def monomial(cls, exp: int, c=ONE) -> "LaurentSeries":
        c = as_scalar(c)
        return cls._make({int(exp): c} if c else {}, INF)

    @classmethod
    def big_o(cls, n: int) -> "LaurentSeries":
        """The unknown series ``O(z^n)``."""
        return cls._make({}, int(n))

    @classmethod
    def parse(cls, text: str) -> "LaurentSeries":
        return parse_series(text)

    # -- basic queries ------------------------------------------------------
    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    @property
    def val(self):
        if self._c:
            return min(self._c)
        return self.cap

    @property
    def is_exact(self) -> bool:
        return self.cap == INF

    @property
    def is_exact_zero(self) -> bool:
        return not self._c and self.cap == INF

    def is_zero_to_precision(self) -> bool:
        """True if every known coefficient vanishes."""
        return not self._c

    def __bool__(self):
        # O(z^n) is not known to be zero, so it stays truthy
        return not self.is_exact_zero

    @property
    def degree(self):
        """Largest stored exponent (polynomials); ``-inf`` when nothing stored."""
        return max(self._c) if self._c else -INF

    def is_polynomial(self) -> bool:
        return self.is_exact and all(e >= 0 for e in self._c)

    def coeff(self, n: int) -> Scalar:
        if n >= self.cap:
            raise PrecisionError(f"coefficient of z^{n} unknown (cap {self.cap})")
        return self._c.get(n, ZERO)

    __getitem__ = coeff

    def items(self):
        """Known nonzero coefficients in increasing exponent order."""
        return sorted(self._c.items())

    def constant_value(self) -> Scalar:
        """Return the value of an exact constant series, else raise ``ValueError``."""
        if not self.is_exact or any(e != 0 for e in self._c):
            raise ValueError(f"{self} is not an exact constant")
        return self._c.get(0, ZERO)

    def is_constant(self) -> bool:
        return self.is_exact and all(e == 0 for e in self._c)

    # -- precision ----------------------------------------------------------
    def truncate(self, n) -> "LaurentSeries":
        """Forget everything at exponents ``>= n``."""
        if n >= self.cap:
            return self
        n = int(n)
        return LaurentSeries._make({e: v for e, v in self._c.items() if e < n}, n)

    def truncate_depth(self, depth: int) -> "LaurentSeries":
        """Keep ``depth`` coefficients above the valuation."""
        v = self.val
        if v == INF:
            return self
        return self.truncate(v + depth)

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, (Scalar, int, Fraction)):
            return LaurentSeries.constant(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        cap = min(self.cap, o.cap)
        c = {e: v for e, v in self._c.items() if e < cap}
        for e, v in o._c.items():
            if e >= cap:
                continue
            if e in c:
                s = c[e] + v
                if s:
                    c[e] = s
                else:
                    del c[e]
            else:
                c[e] = v
        return LaurentSeries._make(c, cap)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries._make({e: -v for e, v in self._c.items()}, self.cap)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, s) -> "LaurentSeries":
        s = as_scalar(s)
        if not s:
            return _EXACT_ZERO if self.is_exact else LaurentSeries._make({}, self.cap)
        # 0 * O(z^n) is exactly zero only when s = 0; otherwise the cap stays
        return LaurentSeries._make({e: v * s for e, v in self._c.items()}, self.cap)

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            s = as_scalar(other)
            if not s:
                return _EXACT_ZERO
            return self.scale(s)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if self.is_exact_zero or other.is_exact_zero:
            return _EXACT_ZERO
        cap = min(self.val + other.cap, other.val + self.cap)
        c: dict = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                if e >= cap:
                    continue
                if e in c:
                    c[e] = c[e] + v1 * v2
                else:
                    c[e] = v1 * v2
        c = {e: v for e, v in c.items() if v}
        if cap != INF:
            cap = int(cap)
        return LaurentSeries._make(c, cap)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = _EXACT_ONE
        for _ in range(k):
            out = out * self
        return out

    def shift_exponent(self, k: int) -> "LaurentSeries":
        """Multiply by ``z^k``."""
        return LaurentSeries._make({e + k: v for e, v in self._c.items()}, self.cap + k)

    def derivative(self) -> "LaurentSeries":
        c = {e - 1: v * e for e, v in self._c.items() if e}
        return LaurentSeries._make(c, self.cap - 1)

    def taylor(self, k: int) -> "LaurentSeries":
        """The k-th Taylor coefficient ``f^{(k)}(z)/k!`` of ``f(z+x)`` in x."""
        if k < 0:
            raise ValueError("Taylor order must be non-negative")
        if k == 0:
            return self
        c = {}
        for e, v in self._c.items():
            b = _gen_binom(e, k)
            if b:
                c[e - k] = v * b
        return LaurentSeries._make(c, self.cap - k)

    def shift(self, order: int) -> "ShiftExpansion":
        if order < 0:
            raise ValueError("order must be non-negative")
        return ShiftExpansion(self, order)

    def residue(self) -> Scalar:
        if self.cap <= -1:
            raise PrecisionError(f"residue unknown: cap {self.cap} <= -1")
        return self._c.get(-1, ZERO)

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentSeries):
            return self.cap == other.cap and self._c == other._c
        if isinstance(other, (Scalar, int, Fraction)):
            return self == LaurentSeries.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self._c.items()), self.cap))
        return self._hash

    def agrees(self, other, upto=None) -> bool:
        """Equality on every exponent known to both (and below ``upto``)."""
        o = self._coerce(other)
        cap = min(self.cap, o.cap)
        if upto is not None:
            cap = min(cap, upto)
        keys = set(self._c) | set(o._c)
        return all(self._c.get(e, ZERO) == o._c.get(e, ZERO) for e in keys if e < cap)

    # -- formatting ---------------------------------------------------------
    def to_string(self, var: str = "z") -> str:
        parts = []
        for e, v in self.items():
            parts.append(_format_term(v, e, var))
        if self.cap != INF:
            parts.append(f"O({var}^{self.cap})")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"LaurentSeries({self.to_string()!r})"

    def to_json(self):
        data = {"coeffs": {str(e): str(v) for e, v in self.items()}}
        data["cap"] = None if self.cap == INF else self.cap
        return data


def _gen_binom(n: int, k: int) -> int:
    """Binomial coefficient C(n, k) for any integer n and k >= 0."""
    if n >= 0:
        return comb(n, k) if k <= n else 0
    return (-1) ** k * comb(k - n - 1, k)


def _format_term(v: Scalar, e: int, var: str) -> str:
    mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
    if not mono:
        return str(v)
    if v == 1:
        return mono
    if v == -1:
        return "-" + mono
    s = str(v)
    if not v.is_real and v.re:
        s = f"({s})"
    return f"{s}*{mono}"


_EXACT_ZERO = LaurentSeries._make({}, INF)
_EXACT_ONE = LaurentSeries._make({0: ONE}, INF)


class ShiftExpansion:
    """Coefficients of x^0..x^order in ``f(z+x)``.

    ``terms[k]`` is ``f^{(k)}(z)/k!``.
    """

    __slots__ = ("base", "order", "terms")

    def __init__(self, base: LaurentSeries, order: int):
        self.base = base
        self.order = order
        self.terms = [base.taylor(k) for k in range(order + 1)]

    def __getitem__(self, k):
        return self.terms[k]

    def __len__(self):
        return self.order + 1

    def at_zero(self) -> LaurentSeries:
        """Setting x = 0 recovers the base series."""
        return self.terms[0]

    def __mul__(self, other: "ShiftExpansion") -> "ShiftExpansion":
        """Product as power series in x, truncated at the common order."""
        order = min(self.order, other.order)
        out = object.__new__(ShiftExpansion)
        out.base = self.base * other.base
        out.order = order
        out.terms = []
        for k in range(order + 1):
            acc = LaurentSeries.zero()
            for i in range(k + 1):
                acc = acc + self.terms[i] * other.terms[k - i]
            out.terms.append(acc)
        return out


# -- parsing -------------------------------------------------------------------

_VARS = ("z", "x", "t", "ξ", "xi", "w")
_TERM_RE = re.compile(
    r"""^(?P<coef>.*?)\*?
        (?P<var>xi|[zxtξw])
        (?:\^\(?(?P<exp>[+-]?\d+)\)?)?$""",
    re.VERBOSE,
)
_BIG_O_RE = re.compile(r"^O\((?:xi|[zxtξw])(?:\^\(?(?P<exp>[+-]?\d+)\)?)?\)$")


def _split_terms(s: str):
    """Split at top-level + and - signs, keeping the sign with the term."""
    terms, depth, start = [], 0, 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parentheses in {s!r}")
        elif ch in "+-" and depth == 0 and i > start:
            prev = s[i - 1]
            if prev in "^*/":
                continue
            terms.append(s[start:i])
            start = i
    if depth:
        raise ValueError(f"unbalanced parentheses in {s!r}")
    terms.append(s[start:])
    return [t for t in terms if t not in ("", "+")]


def _parse_coef(text: str) -> Scalar:
    if text in ("", "+"):
        return ONE
    if text == "-":
        return -ONE
    sign = ONE
    if text[0] in "+-" and text[1:2] == "(":
        sign = -ONE if text[0] == "-" else ONE
        text = text[1:]
    return sign * parse_scalar(text)


def parse_series(text: str) -> LaurentSeries:
    """Parse literals such as ``"z^-1 + 3/2*z^2"``, ``"(1+2i)*z^3 + O(z^5)"``.

    Accepted variable names: z, x, t, w, xi (or the Greek letter).  An
    ``O(z^n)`` term sets the precision cap; without it the value is exact.
    """
    s = str(text).strip().replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty series literal")
    coeffs: dict = {}
    cap = INF
    for term in _split_terms(s):
        body = term.lstrip("+")
        m_o = _BIG_O_RE.match(body)
        if m_o:
            exp = int(m_o.group("exp")) if m_o.group("exp") is not None else 1
            cap = min(cap, exp)
            continue
        m = _TERM_RE.match(body)
        if m:
            coef = _parse_coef(m.group("coef"))
            exp = int(m.group("exp")) if m.group("exp") is not None else 1
        else:
            coef = _parse_coef(body)
            exp = 0
        coeffs[exp] = coeffs.get(exp, ZERO) + coef
    try:
        return LaurentSeries(coeffs, cap)
    except (TypeError, ValueError) as exc:  # pragma: no cover - defensive
        raise ValueError(f"bad series literal {text!r}: {exc}") from None
