"""Induced (vacuum-type) modules realised by PBW straightening.

A vector is a finite combination of *monomials*, each a sorted tuple of
creation keys ``(mode, sector, index)`` with ``mode < 0`` standing for
``u1(n1) u2(n2) ... ur(nr) 1``.  Applying a generator key to a monomial
straightens the word with

    key * first * rest = first * (key * rest) + [key, first] * rest

until every word is sorted.  Keys with ``mode >= 0`` kill the cyclic vector
and the central element acts by the level.

Module kinds
------------
``Mhat``   induced module for the polynomial-p algebra over C (scalar coefficients)
``Vcheck`` induced module for the C((z)) algebra, coefficients in C((z))
``VKl``    induced module for K(l); the ct_n with n < 0 are creation keys
``Vf``     quotient of C((t)) (x) V_K(l) by f(t) 1 = ct_{-1} 1: the ct_j act on
           the C((t)) coefficient by multiplication with ``f^{(k)}(t)/k!``, k = -j-1
``Fock``   the level-l H(f)-module induced from the non-negative beta modes
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from .currents import (
    BETA,
    COPY,
    CTILDE,
    PLAIN,
    AffineContext,
    CurrentElement,
    HfContext,
    KlContext,
)
from .lie import LieAlgebraSpec
from .scalars import ONE, ZERO, as_scalar
from .series import LaurentSeries, parse_series

__all__ = ["PBWVector", "ModuleContext", "build_module", "build_Mhat", "build_Vcheck"]


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


class PBWVector:
    """``sum coef * monomial * 1`` in a module; coefficients per module kind."""

    __slots__ = ("module", "terms")

    def __init__(self, module: "ModuleContext", terms=None):
        self.module = module
        t = {}
        for mono, c in (terms or {}).items():
            mono = tuple(sorted(tuple(k) for k in mono))
            _add_into(t, mono, module.coerce(c))
        self.terms = t

    @classmethod
    def _raw(cls, module, terms):
        obj = object.__new__(cls)
        obj.module = module
        obj.terms = terms
        return obj

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            _add_into(t, k, v)
        return PBWVector._raw(self.module, t)

    def __neg__(self):
        return PBWVector._raw(self.module, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "PBWVector":
        if isinstance(s, int):
            s = as_scalar(s)
        t = {}
        for k, v in self.terms.items():
            _add_into(t, k, v * s)
        return PBWVector._raw(self.module, t)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, PBWVector):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def agrees(self, other) -> bool:
        """Equality on all known coefficients (series coefficients may be truncated)."""
        diff = self - other
        return all(
            c.is_zero_to_precision() if isinstance(c, LaurentSeries) else not c
            for c in diff.terms.values()
        )

    def depth(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __str__(self):
        return self.module.format_vector(self)

    __repr__ = __str__

    def to_json(self):
        return self.module.vector_json(self)


class ModuleContext:
    """A module of one of the kinds listed in the module docstring.

    ``algebra`` is the bracket engine (AffineContext, KlContext, HfContext).
    ``level`` is the scalar by which the canonical central element acts.
    ``f`` (Vf and Fock only) is the defining series.
    """

    KINDS = ("Mhat", "Vcheck", "VKl", "Vf", "Fock")

    def __init__(self, kind: str, algebra, level, f: LaurentSeries | None = None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown module kind {kind!r}; choose from {self.KINDS}")
        self.kind = kind
        self.algebra = algebra
        self.level = as_scalar(level)
        self.f = f
        if kind == "Mhat":
            if not (isinstance(algebra, AffineContext) and algebra.kind == "hat"):
                raise ValueError("Mhat needs the scalar (hat) algebra")
        elif kind == "Vcheck":
            if not (isinstance(algebra, AffineContext) and algebra.kind == "check"):
                raise ValueError("Vcheck needs the C((z)) (check) algebra")
        elif kind in ("VKl", "Vf"):
            if not isinstance(algebra, KlContext):
                raise ValueError(f"{kind} needs a K(l) algebra")
            if self.level != algebra.level:
                raise ValueError("module level must match the K(l) level")
            if kind == "Vf" and f is None:
                raise ValueError("Vf needs the series f")
        elif kind == "Fock":
            if not isinstance(algebra, HfContext):
                raise ValueError("Fock needs an H(f) algebra")
            self.f = algebra.f
            if self.level and self.f.val < 0:
                raise ValueError(
                    "the non-negative beta modes only act trivially on the cyclic vector "
                    "when f has no negative powers (or the level is 0)"
                )
        self.series_coefficients = kind in ("Vcheck", "Vf")
        if self.series_coefficients:
            self.zero_coef = LaurentSeries.zero()
            self.one_coef = LaurentSeries.one()
        else:
            self.zero_coef = ZERO
            self.one_coef = ONE
        self._level_coef = self.one_coef * self.level
        self._memo: dict = {}
        self._scalar_memo: dict = {}
        self.vacuum_mono = ()

    # -- coefficients -------------------------------------------------------
    def coerce(self, c):
        if self.series_coefficients:
            if isinstance(c, LaurentSeries):
                return c
            if isinstance(c, str):
                return parse_series(c)
            return LaurentSeries.constant(c)
        if isinstance(c, LaurentSeries):
            return c.constant_value()
        return as_scalar(c)

    # -- keys ------------------------------------------------------------------
    def scalar_action(self, key):
        """For Vf, ct_j multiplies by the x^{-j-1} coefficient of f(t+x)."""
        if self.kind != "Vf" or key[1] != CTILDE:
            return None
        got = self._scalar_memo.get(key)
        if got is None:
            j = key[0]
            got = self.f.taylor(-j - 1) if j <= -1 else LaurentSeries.zero()
            self._scalar_memo[key] = got
        return got

    def is_creation(self, key) -> bool:
        if key[0] >= 0:
            return False
        return not (self.kind == "Vf" and key[1] == CTILDE)

    def creation_key_types(self):
        """(sector, index) pairs that occur in monomials."""
        if self.kind in ("Mhat", "Vcheck"):
            dim = self.algebra.base.dim
            return [(s, i) for s in (PLAIN, COPY) for i in range(dim)]
        if self.kind == "VKl":
            return [(BETA, 0), (CTILDE, 0)]
        return [(BETA, 0)]

    def generator_key_types(self):
        """(sector, index) pairs whose modes act on the module."""
        if self.kind == "Vf":
            return [(BETA, 0), (CTILDE, 0)]
        return self.creation_key_types()

    # -- vectors ------------------------------------------------------------
    def vacuum(self, coef=None) -> PBWVector:
        c = self.one_coef if coef is None else self.coerce(coef)
        return PBWVector._raw(self, {(): c} if c else {})

    def zero(self) -> PBWVector:
        return PBWVector._raw(self, {})

    def monomial(self, keys, coef=None) -> PBWVector:
        """The vector obtained by applying the keys (rightmost first) to 1."""
        v = self.vacuum(coef)
        for key in reversed(list(keys)):
            v = self.apply_key(key, v)
        return v

    # -- action -------------------------------------------------------------
    def act(self, key, mono) -> dict:
        """``key * mono * 1`` as {monomial: coef}; memoised."""
        memo_key = (key, mono)
        got = self._memo.get(memo_key)
        if got is not None:
            return got
        got = self._act(key, mono)
        self._memo[memo_key] = got
        return got

    def _act(self, key, mono) -> dict:
        sc = self.scalar_action(key)
        if sc is not None:
            return {mono: sc} if sc else {}
        creation = self.is_creation(key)
        if not mono:
            return {(key,): self.one_coef} if creation else {}
        first = mono[0]
        if creation and key <= first:
            return {(key,) + mono: self.one_coef}
        rest = mono[1:]
        out: dict = {}
        # first * (key * rest)
        for m2, c2 in self.act(key, rest).items():
            for m3, c3 in self.act(first, m2).items():
                _add_into(out, m3, c2 * c3)
        # [key, first] * rest
        terms, central = self.algebra.bracket_keys(key, first)
        for k2, c in terms.items():
            for m3, c3 in self.act(k2, rest).items():
                _add_into(out, m3, c * c3)
        if central:
            _add_into(out, rest, central * self._level_coef)
        return out

    def apply_key(self, key, v: PBWVector, coef=None) -> PBWVector:
        out: dict = {}
        for mono, c in v.terms.items():
            for m2, c2 in self.act(key, mono).items():
                _add_into(out, m2, c * c2)
        res = PBWVector._raw(self, out)
        if coef is not None and coef != 1:
            res = res.scale(coef)
        return res

    def apply_mode(self, sector: int, index, n: int, v: PBWVector) -> PBWVector:
        if isinstance(index, str):
            index = self.algebra.base.index[index]
        return self.apply_key((n, sector, index), v)

    def apply_element(self, x: CurrentElement, v: PBWVector) -> PBWVector:
        """Action of an algebra element (generator terms plus central part)."""
        out = self.zero()
        for key, c in x.terms.items():
            out = out + self.apply_key(key, v).scale(self.coerce(c))
        if self.algebra.tag != "Kl" and x.central:
            out = out + v.scale(self.coerce(x.central) * self.level)
        return out

    def apply_word(self, keys, v: PBWVector) -> PBWVector:
        """Apply ``keys[0] keys[1] ... keys[-1]``, the rightmost first."""
        for key in reversed(list(keys)):
            v = self.apply_key(key, v)
        return v

    def multiply_coefficients(self, f, v: PBWVector) -> PBWVector:
        """Multiplication by a series f(z) (C((z))-module structure)."""
        if not self.series_coefficients:
            raise ValueError(f"{self.kind} has scalar coefficients")
        return v.scale(self.coerce(f))

    # -- the translation operator ----------------------------------------------------
    def apply_D(self, v: PBWVector) -> PBWVector:
        """The operator with D1 = 0, [D, u(n)] = -n u(n-1), [D, f(z)] = f'(z)."""
        if self.kind not in ("VKl", "Vcheck"):
            raise ValueError("the translation operator is provided on VKl and Vcheck")
        out: dict = {}
        for mono, c in v.terms.items():
            if self.series_coefficients:
                dc = c.derivative()
                if dc:
                    _add_into(out, mono, dc)
            for i, (n, s, idx) in enumerate(mono):
                # u(n) -> -n u(n-1) in slot i, then re-straighten the word
                word = mono[:i] + ((n - 1, s, idx),) + mono[i + 1 :]
                w = self.apply_word(word, self.vacuum())
                for m2, c2 in w.terms.items():
                    _add_into(out, m2, c2 * c * (-n))
        return PBWVector._raw(self, out)

    # -- restrictedness ----------------------------------------------------------
    def a_priori_bound(self, v: PBWVector) -> int:
        """N with u(n) v = 0 for all n >= N, from the filtration argument.

        Brackets never lower the total mode below the sum of the inputs, and
        with polynomial p the copied-copied bracket only raises modes by
        ``0..deg p``.  Commuting u(n) through a monomial of total creation
        depth ``sum |n_i|`` therefore leaves only non-negative modes once
        ``n > sum |n_i|``; the extra ``deg p`` is a conservative margin.
        """
        depth = max((sum(-k[0] for k in mono) for mono in v.terms), default=0)
        deg = getattr(self.algebra, "deg_p", 0)
        return depth + max(deg, 0) + 1

    def restrictedness_bound(self, sector: int, index, v: PBWVector) -> dict:
        """Tight N for the key type ``(sector, index)`` on v.

        Returns {"bound": N, "a_priori": N0, "checked": [...]} where N is the
        least value such that the modes N0, N0-1, ..., N all annihilate v
        (so mode N-1 does not, unless N = the lowest mode evaluated).
        """
        if isinstance(index, str):
            index = self.algebra.base.index[index]
        n0 = self.a_priori_bound(v)
        checked = []
        n = n0
        # sanity: the a priori bound itself must annihilate
        if self.apply_key((n0, sector, index), v):
            raise AssertionError("a priori restrictedness bound is not annihilating")
        checked.append(n0)
        while n > -1:
            w = self.apply_key((n - 1, sector, index), v)
            checked.append(n - 1)
            if w:
                break
            n -= 1
        return {"bound": n, "a_priori": n0, "checked": checked}

    # -- enumeration ---------------------------------------------------------------
    def pbw_basis(self, depth: int, max_mode: int = None):
        """Sorted monomials of length <= depth with modes in [-max_mode, -1].

        ``max_mode`` defaults to ``depth``.
        """
        if max_mode is None:
            max_mode = depth
        keys = sorted(
            (n, s, i) for n in range(-max_mode, 0) for (s, i) in self.creation_key_types()
        )
        out = []
        for r in range(depth + 1):
            for combo in combinations_with_replacement(keys, r):
                out.append(combo)
        return out

    def key_name(self, key):
        return self.algebra.key_name(key)

    def format_mono(self, mono) -> str:
        if not mono:
            return "1"
        return " ".join(self.key_name(k) for k in mono) + " 1"

    def format_vector(self, v: PBWVector) -> str:
        if not v.terms:
            return "0"
        parts = []
        var = "t" if self.kind == "Vf" else "z"
        for mono, c in v.sorted_terms():
            body = self.format_mono(mono)
            if isinstance(c, LaurentSeries):
                if c.is_constant():
                    c = c.constant_value()
                else:
                    parts.append(f"({c.to_string(var)})*{body}")
                    continue
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            elif not c.is_real and c.re:
                parts.append(f"({c})*{body}")
            else:
                parts.append(f"{c}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def vector_json(self, v: PBWVector):
        out = []
        for mono, c in v.sorted_terms():
            out.append(
                {
                    "monomial": [self.key_name(k) for k in mono],
                    "coef": c.to_json() if isinstance(c, LaurentSeries) else str(c),
                }
            )
        return out

    def parse_vector(self, text: str) -> PBWVector:
        """Parse ``"f^1@-1*1"``, ``"e@-1 f@-2 1"``, ``"2*e@-1*1 + h@-1*1"``.

        Each summand is an optional coefficient followed by generator
        descriptors applied (rightmost first) to the cyclic vector ``1``.
        """
        from .currents import _split_top

        s = text.strip()
        if not s:
            raise ValueError("empty vector")
        total = self.zero()
        for part in _split_top(s.replace(" ", "~")):
            part = part.replace("~", " ").strip()
            sign = 1
            if part[:1] in "+-":
                sign = -1 if part[0] == "-" else 1
                part = part[1:].strip()
            tokens = [t for t in part.replace("*", " ").split() if t]
            if not tokens or tokens[-1] != "1":
                raise ValueError(f"vector summand {part!r} must end with the cyclic vector 1")
            tokens = tokens[:-1]
            coef = self.one_coef
            if tokens and "@" not in tokens[0]:
                tok = tokens[0]
                if tok.startswith("(") and tok.endswith(")"):
                    tok = tok[1:-1]
                coef = self.coerce(tok)
                tokens = tokens[1:]
            keys = []
            for tok in tokens:
                x = self.algebra.parse(tok)
                if len(x.terms) != 1:
                    raise ValueError(f"bad generator {tok!r} in vector")
                (key, c), = x.terms.items()
                keys.append(key)
            v = self.apply_word(keys, self.vacuum(coef))
            total = total + (v if sign == 1 else -v)
        return total


def build_module(kind: str, base: LieAlgebraSpec | None = None, p=None, level=1, f=None):
    """Convenience constructor for all module kinds."""
    level = as_scalar(level)
    if kind in ("Mhat", "Vcheck"):
        if base is None or p is None:
            raise ValueError(f"{kind} needs a base Lie algebra and a polynomial p")
        alg = AffineContext(base, p, "hat" if kind == "Mhat" else "check")
        return ModuleContext(kind, alg, level)
    if kind in ("VKl", "Vf"):
        if isinstance(f, str):
            f = parse_series(f)
        elif f is not None and not isinstance(f, LaurentSeries):
            f = LaurentSeries.constant(f)
        return ModuleContext(kind, KlContext(level), level, f)
    if kind == "Fock":
        return ModuleContext(kind, HfContext(f if f is not None else 1), level)
    raise ValueError(f"unknown module kind {kind!r}")


def build_Mhat(base, p, level) -> ModuleContext:
    return build_module("Mhat", base, p, level)


def build_Vcheck(base, p, level) -> ModuleContext:
    return build_module("Vcheck", base, p, level)
