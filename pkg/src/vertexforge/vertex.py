"""Operator series on modules, residue n-th products and state-field maps.

An :class:`OperatorSeries` ``A(x) = sum_m A_m x^{-m-1}`` on a module W is
evaluated lazily: ``A.mode(m, v)`` returns ``A_m v`` and ``A.bound(v)`` an
integer N with ``A_m v = 0`` for every ``m >= N``.  Every construction below
propagates these truncation certificates, so infinite residue sums collapse
to finite ones.

The n-th product of local series is

    (A_n B)_m = sum_{i>=0} C(n,i) (-1)^i [ A_{n-i} B_{m+i} - (-1)^n B_{m+n-i} A_i ]

which is the residue formula ``Res_{x1}((x1-x)^n A(x1)B(x) - (-x+x1)^n B(x)A(x1))``
read off coefficientwise (C(n,i) the generalised binomial coefficient).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .modules import ModuleContext, PBWVector
from .scalars import as_scalar
from .series import INF, LaurentSeries

__all__ = [
    "OperatorSeries",
    "Field",
    "Identity",
    "Multiplier",
    "NthProduct",
    "Combination",
    "SeriesTimes",
    "Derivative",
    "nth_product",
    "commutator_sum_oracle",
    "locality_order",
    "locality_coefficient",
    "YMap",
    "vertex_operator_map",
    "type_zero_map",
    "heisenberg_map",
    "gen_binom",
    "series_window",
    "borcherds_defect",
    "skew_symmetry_defect",
]


def gen_binom(n: int, i: int) -> int:
    """C(n, i) for any integer n and i >= 0."""
    if i < 0:
        return 0
    if n >= 0:
        return comb(n, i) if i <= n else 0
    return (-1) ** i * comb(i - n - 1, i)


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


def _single(W: ModuleContext, mono) -> PBWVector:
    return PBWVector._raw(W, {mono: W.one_coef})


class OperatorSeries:
    """Base class: subclasses implement ``_mode_mono`` and ``_bound_mono``."""

    def __init__(self, module: ModuleContext):
        self.module = module
        self._mode_cache: dict = {}
        self._bound_cache: dict = {}

    # -- per-monomial evaluation (memoised) -----------------------------------------
    def mode_mono(self, m: int, mono) -> dict:
        key = (m, mono)
        got = self._mode_cache.get(key)
        if got is None:
            if m >= self.bound_mono(mono):
                got = {}
            else:
                got = self._mode_mono(m, mono)
            self._mode_cache[key] = got
        return got

    def bound_mono(self, mono) -> int:
        got = self._bound_cache.get(mono)
        if got is None:
            got = self._bound_mono(mono)
            self._bound_cache[mono] = got
        return got

    def _mode_mono(self, m, mono) -> dict:  # pragma: no cover - abstract
        raise NotImplementedError

    def _bound_mono(self, mono) -> int:  # pragma: no cover - abstract
        raise NotImplementedError

    # -- linear extension ------------------------------------------------------------
    def mode(self, m: int, v: PBWVector) -> PBWVector:
        out: dict = {}
        for mono, c in v.terms.items():
            for m2, c2 in self.mode_mono(m, mono).items():
                _add_into(out, m2, c * c2)
        return PBWVector._raw(self.module, out)

    def bound(self, v: PBWVector) -> int:
        return max((self.bound_mono(mono) for mono in v.terms), default=-(10**9))

    def modes(self, v: PBWVector, lo: int, hi: int) -> dict:
        """{m: A_m v} for lo <= m <= hi."""
        return {m: self.mode(m, v) for m in range(lo, hi + 1)}

    def apply(self, v: PBWVector, lo: int = None, hi: int = None) -> dict:
        """``A(x) v`` as {x-exponent: vector}, nonzero terms only.

        Modes run from ``lo`` to ``hi`` (default: up to the certificate, so
        the returned series is complete above ``x^{-hi-1}``).
        """
        top = self.bound(v) - 1
        if hi is None:
            hi = top
        if lo is None:
            lo = hi - 7
        out = {}
        for m in range(lo, min(hi, top) + 1):
            w = self.mode(m, v)
            if w:
                out[-m - 1] = w
        return out

    # -- operator algebra ------------------------------------------------------------
    def nth(self, other: "OperatorSeries", n: int) -> "NthProduct":
        return NthProduct(self, other, n)


class Field(OperatorSeries):
    """The generating series ``u(x) = sum u(m) x^{-m-1}`` of a generator key type."""

    def __init__(self, module, sector: int, index: int):
        super().__init__(module)
        self.sector = sector
        self.index = index

    def _mode_mono(self, m, mono):
        return self.module.act((m, self.sector, self.index), mono)

    def _bound_mono(self, mono):
        W = self.module
        n0 = W.a_priori_bound(_single(W, mono))
        n = n0
        while n > 0:
            if W.act((n - 1, self.sector, self.index), mono):
                break
            n -= 1
        return n

    def __repr__(self):
        return f"Field({self.module.key_name((0, self.sector, self.index))})"


class Identity(OperatorSeries):
    """``1_W``: only the mode -1 is nonzero, and it is the identity."""

    def _mode_mono(self, m, mono):
        return {mono: self.module.one_coef} if m == -1 else {}

    def _bound_mono(self, mono):
        return 0

    def __repr__(self):
        return "Identity"


class Multiplier(OperatorSeries):
    """Multiplication by a scalar series.

    ``shift=False``: the series ``s(x) = sum s_k x^k`` with Scalar
    coefficients acting by scalars (the type-zero rule ``f(t) -> f(x)``).

    ``shift=True``: ``s(z+x) = sum_k S_k(z) x^k`` on a module with C((z))
    coefficients, ``S_k = s^{(k)}/k!`` (the rule ``f(z) -> f(z+x)``).
    """

    def __init__(self, module, s: LaurentSeries, shift: bool = False):
        super().__init__(module)
        self.s = s
        self.shift = shift
        if shift and not module.series_coefficients:
            raise ValueError("the shift rule needs a module with series coefficients")
        self._taylor: dict = {}

    def coefficient(self, k: int):
        """Coefficient of x^k, in the module's coefficient ring."""
        if self.shift:
            if k < 0:
                return self.module.zero_coef
            got = self._taylor.get(k)
            if got is None:
                got = self.s.taylor(k)
                self._taylor[k] = got
            return got
        c = self.s.coeff(k)  # may raise PrecisionError
        return self.module.coerce(c)

    @property
    def x_val(self):
        return 0 if self.shift else self.s.val

    def _mode_mono(self, m, mono):
        c = self.coefficient(-m - 1)
        return {mono: c} if c else {}

    def _bound_mono(self, mono):
        if self.shift:
            return 0
        v = self.s.val
        if v == INF:
            return -(10**9)
        return -v

    def __repr__(self):
        return f"Multiplier({self.s}{', shift' if self.shift else ''})"


class SeriesTimes(OperatorSeries):
    """``s(x) A(x)``: mode m is ``sum_j s_j A_{m+j}`` (s a Multiplier)."""

    def __init__(self, s: Multiplier, A: OperatorSeries):
        super().__init__(A.module)
        self.s = s
        self.A = A

    def _mode_mono(self, m, mono):
        out: dict = {}
        nA = self.A.bound_mono(mono)
        j = self.s.x_val
        if j == INF:
            return out
        while m + j < nA:
            c = self.s.coefficient(j)
            if c:
                for m2, c2 in self.A.mode_mono(m + j, mono).items():
                    _add_into(out, m2, c * c2)
            j += 1
        return out

    def _bound_mono(self, mono):
        v = self.s.x_val
        if v == INF:
            return -(10**9)
        return self.A.bound_mono(mono) - v


class Combination(OperatorSeries):
    """``sum c_j S_j`` with coefficients in the module's coefficient ring."""

    def __init__(self, module, parts):
        super().__init__(module)
        self.parts = [(module.coerce(c), S) for c, S in parts]

    def _mode_mono(self, m, mono):
        out: dict = {}
        for c, S in self.parts:
            for m2, c2 in S.mode_mono(m, mono).items():
                _add_into(out, m2, c * c2)
        return out

    def _bound_mono(self, mono):
        return max((S.bound_mono(mono) for _, S in self.parts), default=-(10**9))


class Derivative(OperatorSeries):
    """``d/dx A(x)``: mode m is ``-m A_{m-1}``."""

    def __init__(self, A: OperatorSeries):
        super().__init__(A.module)
        self.A = A

    def _mode_mono(self, m, mono):
        if m == 0:
            return {}
        return {m2: c * (-m) for m2, c in self.A.mode_mono(m - 1, mono).items()}

    def _bound_mono(self, mono):
        return self.A.bound_mono(mono) + 1


class NthProduct(OperatorSeries):
    """``A(x)_n B(x)`` by the residue formula, truncated by certificates."""

    def __init__(self, A: OperatorSeries, B: OperatorSeries, n: int):
        if A.module is not B.module:
            raise ValueError("operator series live on different modules")
        super().__init__(A.module)
        self.A = A
        self.B = B
        self.n = n

    def _mode_mono(self, m, mono):
        A, B, n = self.A, self.B, self.n
        out: dict = {}
        # sum_i C(n,i)(-1)^i A_{n-i} B_{m+i} v,  B_{m+i} v = 0 once m+i >= N_B(v)
        nB = B.bound_mono(mono)
        i = 0
        while m + i < nB:
            b = gen_binom(n, i)
            if b:
                coef = b if i % 2 == 0 else -b
                for m2, c2 in B.mode_mono(m + i, mono).items():
                    for m3, c3 in A.mode_mono(n - i, m2).items():
                        _add_into(out, m3, c2 * c3 * coef)
            elif n >= 0 and i > n:
                break
            i += 1
        # - sum_i C(n,i)(-1)^{n+i} B_{m+n-i} A_i v,  A_i v = 0 once i >= N_A(v)
        nA = A.bound_mono(mono)
        sign_n = -1 if n % 2 else 1
        for i in range(max(nA, 0)):
            b = gen_binom(n, i)
            if not b:
                if n >= 0 and i > n:
                    break
                continue
            coef = -b * sign_n * (1 if i % 2 == 0 else -1)
            for m2, c2 in A.mode_mono(i, mono).items():
                for m3, c3 in B.mode_mono(m + n - i, m2).items():
                    _add_into(out, m3, c2 * c3 * coef)
        return out

    def _bound_mono(self, mono):
        A, B, n = self.A, self.B, self.n
        N = B.bound_mono(mono)
        nA = A.bound_mono(mono)
        for i in range(max(nA, 0)):
            if n >= 0 and i > n:
                break
            for m2 in A.mode_mono(i, mono):
                N = max(N, B.bound_mono(m2) + i - n)
        return N

    def __repr__(self):
        return f"({self.A!r})_{self.n}({self.B!r})"


def nth_product(A: OperatorSeries, B: OperatorSeries, n: int) -> NthProduct:
    return NthProduct(A, B, n)


def commutator_sum_oracle(A: OperatorSeries, B: OperatorSeries, n: int, m: int, v: PBWVector):
    """``(A_n B)_m v = sum_{i=0}^n C(n,i)(-1)^i [A_{n-i}, B_{m+i}] v`` for n >= 0."""
    if n < 0:
        raise ValueError("the finite commutator formula needs n >= 0")
    W = A.module
    out = W.zero()
    for i in range(n + 1):
        b = comb(n, i) * (-1) ** i
        t = A.mode(n - i, B.mode(m + i, v)) - B.mode(m + i, A.mode(n - i, v))
        out = out + t.scale(b)
    return out


# -- locality ------------------------------------------------------------------------------


def locality_coefficient(A, B, k: int, p: int, q: int, v: PBWVector) -> PBWVector:
    """Coefficient of ``x^{-p-1} z^{-q-1}`` in ``(x-z)^k [A(x), B(z)] v``."""
    W = A.module
    out = W.zero()
    for l in range(k + 1):
        b = comb(k, l) * (-1) ** l
        i, j = p + k - l, q + l
        t = A.mode(i, B.mode(j, v)) - B.mode(j, A.mode(i, v))
        if t:
            out = out + t.scale(b)
    return out


def locality_order(A, B, probes, k_max: int = 6, window=(-3, 3)):
    """Least k <= k_max with ``(x-z)^k [A(x), B(z)] = 0`` on the probes.

    Checks every coefficient with both mode indices in ``window``.  Returns
    ``(k, witness)`` where witness (for k-1, when k > 0) records a nonzero
    coefficient; ``(None, witness)`` if no k <= k_max works.
    """
    lo, hi = window
    witness = None
    for k in range(k_max + 1):
        bad = None
        for v in probes:
            for p in range(lo, hi + 1):
                for q in range(lo, hi + 1):
                    c = locality_coefficient(A, B, k, p, q, v)
                    if c:
                        bad = {"k": k, "p": p, "q": q, "probe": str(v), "value": str(c)}
                        break
                if bad:
                    break
            if bad:
                break
        if bad is None:
            return k, witness
        witness = bad
    return None, witness


# -- state-field maps ------------------------------------------------------------------------


class YMap:
    """The map ``v -> Y(v, x)`` from a source module into operator series on a target.

    Monomials go through the n-th product recursion

        Y(u1(n1) u2(n2) ... 1, x) = u1(x)_{n1} Y(u2(n2) ... 1, x),   Y(1, x) = 1_W

    and coefficients through ``scalar_rule``: ``"shift"`` (``f(z) -> f(z+x)``,
    target = a series-coefficient module), ``"type0"`` (``f -> f(x)`` acting
    by scalars), or ``"scalar"`` (the source already has scalar coefficients).
    """

    def __init__(self, source: ModuleContext, target: ModuleContext, fields: dict, scalar_rule: str):
        if scalar_rule not in ("shift", "type0", "scalar"):
            raise ValueError(f"bad scalar rule {scalar_rule!r}")
        self.source = source
        self.target = target
        self.fields = fields
        self.scalar_rule = scalar_rule
        self._mono_cache: dict = {}
        self.identity = Identity(target)

    def generator(self, sector, index) -> OperatorSeries:
        return self.fields[(sector, index)]

    def Y_mono(self, mono) -> OperatorSeries:
        got = self._mono_cache.get(mono)
        if got is None:
            if not mono:
                got = self.identity
            else:
                (n, s, i) = mono[0]
                got = NthProduct(self.fields[(s, i)], self.Y_mono(mono[1:]), n)
            self._mono_cache[mono] = got
        return got

    def scalar_series(self, c) -> OperatorSeries | None:
        """The multiplier attached to a source coefficient (None for scalar rule)."""
        if self.scalar_rule == "scalar":
            return None
        if not isinstance(c, LaurentSeries):
            c = LaurentSeries.constant(c)
        return Multiplier(self.target, c, shift=(self.scalar_rule == "shift"))

    def Y(self, v: PBWVector) -> OperatorSeries:
        if v.module is not self.source:
            raise ValueError("vector does not belong to the source module")
        parts = []
        for mono, c in v.sorted_terms():
            S = self.Y_mono(mono)
            if self.scalar_rule == "scalar":
                parts.append((c, S))
            elif isinstance(c, LaurentSeries) and c.is_constant() and self.scalar_rule == "type0":
                parts.append((c.constant_value(), S))
            elif self.scalar_rule == "shift" and isinstance(c, LaurentSeries) and c.is_constant():
                parts.append((c, S))
            else:
                parts.append((self.target.one_coef, SeriesTimes(self.scalar_series(c), S)))
        return Combination(self.target, parts)

    def Y_scalar(self, f) -> OperatorSeries:
        """``Y(f 1, x)`` for a coefficient series f."""
        return self.scalar_series(f)


def vertex_operator_map(V: ModuleContext) -> YMap:
    """The state-field map of a vacuum module on itself (Vcheck, VKl or Vf).

    On Vf the ct-type keys never occur in monomials (ct_{-1} 1 = f(t) 1), and
    series coefficients follow the shift rule ``f(t) -> f(t+x)``.
    """
    if V.kind not in ("Vcheck", "VKl", "Vf"):
        raise ValueError("the adjoint map is built on Vcheck, VKl or Vf")
    fields = {(s, i): Field(V, s, i) for (s, i) in V.creation_key_types()}
    return YMap(V, V, fields, "shift" if V.series_coefficients else "scalar")


def type_zero_map(V: ModuleContext, W: ModuleContext) -> YMap:
    """``Y_W`` for Vcheck acting on Mhat: generators act by the scalar algebra's fields."""
    if V.kind != "Vcheck" or W.kind != "Mhat":
        raise ValueError("type-zero map goes from Vcheck to Mhat")
    if V.level != W.level:
        raise ValueError("levels differ")
    fields = {(s, i): Field(W, s, i) for (s, i) in W.creation_key_types()}
    return YMap(V, W, fields, "type0")


def heisenberg_map(V: ModuleContext, W: ModuleContext) -> YMap:
    """``Y_W`` from VKl or Vf into the Fock module of H(f).

    ``bt -> beta(x)`` and ``ct -> f(x)`` (a scalar multiplier).
    """
    if W.kind != "Fock":
        raise ValueError("target must be the Fock module")
    fields = {(0, 0): Field(W, 0, 0), (1, 0): Multiplier(W, W.f)}
    if V.kind == "VKl":
        return YMap(V, W, fields, "scalar")
    if V.kind == "Vf":
        return YMap(V, W, fields, "type0")
    raise ValueError("source must be VKl or Vf")


def series_window(S: OperatorSeries, v: PBWVector, width: int = 8, lo=None):
    """Mode window ``[lo, lo+width-1]`` ending at the certificate when lo is None."""
    top = S.bound(v)
    if lo is None:
        lo = top - width
    return lo, lo + width - 1


def borcherds_defect(Ysrc: YMap, Ytgt: YMap, u, v, w, p: int, q: int, r: int, sides: bool = False):
    """LHS - RHS of the Borcherds identity for states u, v and a target vector w.

        sum_i C(p,i) (u_{r+i} v)_{p+q-i} w
            = sum_i (-1)^i C(r,i) [ u_{p+r-i} v_{q+i} w - (-1)^r v_{q+r-i} u_{p+i} w ]

    ``u_k v`` is computed in the source (``Ysrc``, the source's own state-field
    map) and the outer modes through ``Ytgt``.  All sums are cut off by the
    truncation certificates.  With ``sides=True`` returns ``(lhs, rhs)``.
    """
    Yu_src = Ysrc.Y(u)
    Yu, Yv = Ytgt.Y(u), Ytgt.Y(v)
    W = Ytgt.target
    lhs = W.zero()
    i = 0
    while r + i < Yu_src.bound(v):
        b = gen_binom(p, i)
        if b:
            state = Yu_src.mode(r + i, v)
            if state:
                lhs = lhs + Ytgt.Y(state).mode(p + q - i, w).scale(b)
        elif p >= 0 and i > p:
            break
        i += 1
    rhs = W.zero()
    i = 0
    while q + i < Yv.bound(w):
        b = gen_binom(r, i)
        if b:
            rhs = rhs + Yu.mode(p + r - i, Yv.mode(q + i, w)).scale(b * (-1) ** i)
        elif r >= 0 and i > r:
            break
        i += 1
    i = 0
    while p + i < Yu.bound(w):
        b = gen_binom(r, i)
        if b:
            sign = (-1) ** i * (-1) ** (r % 2)
            rhs = rhs - Yv.mode(q + r - i, Yu.mode(p + i, w)).scale(b * sign)
        elif r >= 0 and i > r:
            break
        i += 1
    if sides:
        return lhs, rhs
    return lhs - rhs


def skew_symmetry_defect(Y: YMap, u, v, m: int):
    """Coefficient of x^{-m-1} in ``Y(u,x)v - e^{xD} Y(v,-x)u``.

    The right side contributes ``sum_k (-1)^{m+k+1} D^k/k! v_{m+k} u``.
    """
    V = Y.source
    lhs = Y.Y(u).mode(m, v)
    Yv = Y.Y(v)
    rhs = V.zero()
    k = 0
    while m + k < Yv.bound(u):
        t = Yv.mode(m + k, u)
        for _ in range(k):
            t = V.apply_D(t)
        sign = -1 if (m + k + 1) % 2 else 1
        rhs = rhs + t.scale(as_scalar(Fraction(sign, factorial(k))))
        k += 1
    return lhs - rhs

