"""Exact Gaussian rationals, the ground field used everywhere in the package."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

__all__ = ["Scalar", "as_scalar", "parse_scalar", "ZERO", "ONE"]


class Scalar:
    """An element ``re + im*i`` of Q(i), both parts exact fractions.

    Instances are immutable and hashable.  Arithmetic accepts ints and
    Fractions on either side.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, str):
            parsed = parse_scalar(re)
            re, im = parsed.re, parsed.im + Fraction(im)
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "Scalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- predicates ---------------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self) -> bool:
        return not self.im

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Scalar):
            return Scalar._raw(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Rational)):
            return Scalar._raw(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, Scalar):
            return Scalar._raw(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Rational)):
            return Scalar._raw(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Rational)):
            return Scalar._raw(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Scalar):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return Scalar._raw(a * c, b)
            return Scalar._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Rational)):
            return Scalar._raw(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self:
            raise ZeroDivisionError("inverse of zero scalar")
        norm = self.re * self.re + self.im * self.im
        return Scalar._raw(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        if isinstance(other, Scalar):
            return self * other.inverse()
        if isinstance(other, (int, Rational)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return Scalar._raw(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "Scalar":
        return Scalar._raw(self.re, -self.im)

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __reduce__(self):
        return (Scalar, (self.re, self.im))

    # -- formatting ---------------------------------------------------------
    def __str__(self):
        if not self.im:
            return _fmt(self.re)
        im = "i" if self.im == 1 else "-i" if self.im == -1 else f"{_fmt(self.im)}i"
        if not self.re:
            return im
        if im.startswith("-"):
            return f"{_fmt(self.re)}{im}"
        return f"{_fmt(self.re)}+{im}"

    def __repr__(self):
        return f"Scalar({self})"

    def to_json(self):
        """Real values as strings like ``"3/2"``; complex as ``"1+2i"``."""
        return str(self)


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


ZERO = Scalar._raw(Fraction(0), Fraction(0))
ONE = Scalar._raw(Fraction(1), Fraction(0))


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Rational)):
        return Scalar._raw(Fraction(x), Fraction(0))
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")


_REAL = r"\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^(?P<re>[+-]?{_REAL})?(?:(?P<isign>[+-])?(?P<im>{_REAL})?\*?i)?$"
)


def parse_scalar(text: str) -> Scalar:
    """Parse ``"3/2"``, ``"-i"``, ``"1+2i"``, ``"(1-3/2i)"`` and friends."""
    s = text.strip().replace(" ", "")
    while s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    m = _SCALAR_RE.match(s)
    if not s or m is None or (m.group("re") is None and not s.endswith("i")):
        raise ValueError(f"not a Gaussian rational: {text!r}")
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_part = Fraction(0)
    if s.endswith("i"):
        im_part = Fraction(m.group("im")) if m.group("im") else Fraction(1)
        if m.group("isign") == "-":
            im_part = -im_part
        elif m.group("isign") is None and m.group("re") is not None:
            # "2i" parses as re=2 with a bare "i": reinterpret as pure imaginary
            im_part, re_part = re_part * im_part, Fraction(0)
    return Scalar._raw(re_part, im_part)
