"""Named verification suites.

Each suite runs a battery of checks for one structural statement and returns
a list of :class:`Check` records.  Randomised trials draw from
``random.Random(f"{seed}:{suite}:{check}:{trial}")`` so results depend only
on the configuration, never on scheduling or on which other checks ran.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from .currents import (
    BETA,
    COPY,
    CTILDE,
    PLAIN,
    AffineContext,
    HfContext,
    KgpContext,
    KlContext,
    elliptic_p,
    reduce_mod_dR,
)
from .lie import LieAlgebraSpec, load_algebra
from .modules import ModuleContext, PBWVector, build_module
from .oracle import affine_bracket_table_oracle, hf_bracket_oracle, kl_bracket_oracle
from .scalars import ZERO, Scalar, as_scalar, parse_scalar
from .series import INF, LaurentSeries, PrecisionError, parse_series
from .vertex import (
    Derivative,
    Field,
    Identity,
    Multiplier,
    NthProduct,
    borcherds_defect,
    commutator_sum_oracle,
    gen_binom,
    heisenberg_map,
    locality_order,
    skew_symmetry_defect,
    type_zero_map,
    vertex_operator_map,
)

__all__ = ["SuiteConfig", "Check", "SUITES", "run_suite", "worst_status"]

PASS, FAIL, LIMITED = "pass", "fail", "precision-limited"
_RANK = {PASS: 0, LIMITED: 1, FAIL: 2}
MAX_WITNESSES = 3


@dataclass
class SuiteConfig:
    suite: str
    algebra: str = "sl2"
    beta: str | None = None
    p: str | None = None
    level: str = "1"
    f: str | None = None
    trunc: int = 16
    depth: int = 3
    trials: int | None = None
    seed: int = 0

    def lie(self) -> LieAlgebraSpec:
        return load_algebra(self.algebra)

    def poly(self) -> LaurentSeries:
        if self.p is not None:
            return parse_series(self.p)
        return elliptic_p(parse_scalar(self.beta or "0"))

    def level_scalar(self) -> Scalar:
        return parse_scalar(str(self.level))

    def f_series(self, default="1") -> LaurentSeries:
        return parse_series(self.f if self.f is not None else default)

    def echo(self) -> dict:
        out = asdict(self)
        out["p_resolved"] = str(self.poly())
        return out


class Check:
    """Pass/fail tally for one property, with reproducible witnesses."""

    def __init__(self, name: str, window=None):
        self.name = name
        self.passed = 0
        self.failed = 0
        self.limited = 0
        self.witnesses: list = []
        self.window = window
        self.info: dict = {}

    def record(self, ok: bool, witness=None):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(witness() if callable(witness) else witness)

    def precision(self, witness):
        self.limited += 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append({"precision": witness})

    @property
    def status(self) -> str:
        if self.failed:
            return FAIL
        if self.limited:
            return LIMITED
        return PASS

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "status": self.status,
            "passed": self.passed,
            "failed": self.failed,
            "precision_limited": self.limited,
        }
        if self.window is not None:
            out["window"] = self.window
        if self.info:
            out["info"] = self.info
        if self.witnesses:
            out["witnesses"] = self.witnesses
        return out


def _borcherds_modes(rng):
    """Mode triple (p, q, r); outer modes are biased low so both sides are rarely empty."""
    return rng.randint(-3, 1), rng.randint(-3, 1), rng.randint(-2, 2)


def _count_nontrivial(check: Check, value):
    """Tally instances whose compared sides are nonzero (so the check had content)."""
    check.info["nonzero_instances"] = check.info.get("nonzero_instances", 0) + (1 if value else 0)


def worst_status(statuses) -> str:
    return max(statuses, key=lambda s: _RANK[s], default=PASS)


def _rng(cfg: SuiteConfig, check: str, trial: int) -> random.Random:
    return random.Random(f"{cfg.seed}:{cfg.suite}:{check}:{trial}")


# -- random inputs --------------------------------------------------------------------------


def rand_scalar(rng: random.Random, allow_zero=False) -> Scalar:
    while True:
        re = Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2)))
        im = Fraction(rng.randint(-1, 1), 2) if rng.random() < 0.2 else Fraction(0)
        s = Scalar(re, im)
        if s or allow_zero:
            return s


def rand_poly(rng, lo=-2, hi=2, terms=2) -> LaurentSeries:
    """Exact Laurent polynomial with at most ``terms`` monomials."""
    c = {}
    for _ in range(rng.randint(1, terms)):
        c[rng.randint(lo, hi)] = rand_scalar(rng)
    return LaurentSeries(c)


def rand_truncated(rng, depth: int, val_range=(-2, 1)) -> LaurentSeries:
    """A series known on exactly ``depth`` exponents starting at a random valuation."""
    v = rng.randint(*val_range)
    c = {v: rand_scalar(rng)}
    for e in range(v + 1, v + depth):
        if rng.random() < 0.6:
            c[e] = rand_scalar(rng)
    return LaurentSeries(c, cap=v + depth)


def rand_affine_element(rng, ctx: AffineContext, modes=(-4, 4), max_terms=2, central=True):
    x = ctx.zero()
    dim = ctx.base.dim
    for _ in range(rng.randint(1, max_terms)):
        coef = rand_poly(rng, -1, 2) if ctx.kind == "check" else rand_scalar(rng)
        x = x + ctx.gen(rng.choice((PLAIN, COPY)), rng.randrange(dim), rng.randint(*modes), coef)
    if central and rng.random() < 0.3:
        x = x + ctx.k(rand_poly(rng, -1, 2) if ctx.kind == "check" else rand_scalar(rng))
    return x


def rand_key(rng, module: ModuleContext, modes=(-4, 4)):
    s, i = rng.choice(module.generator_key_types())
    return (rng.randint(*modes), s, i)


def rand_monomial(rng, module: ModuleContext, depth: int, modes=(-3, -1), min_len=0):
    types = module.creation_key_types()
    keys = []
    for _ in range(rng.randint(min_len, depth)):
        s, i = rng.choice(types)
        keys.append((rng.randint(*modes), s, i))
    return tuple(sorted(keys))


def rand_vector(rng, module: ModuleContext, depth: int, terms=2, series_depth=None, min_len=0) -> PBWVector:
    """Sum of up to ``terms`` random monomials of length in [min_len, depth]."""
    out = {}
    for _ in range(rng.randint(1, terms)):
        mono = rand_monomial(rng, module, depth, min_len=min_len)
        if module.series_coefficients:
            c = rand_truncated(rng, series_depth) if series_depth else rand_poly(rng, -1, 2)
        else:
            c = rand_scalar(rng)
        out[mono] = out[mono] + c if mono in out else c
    return PBWVector(module, out)


def _coef_ok(c) -> bool:
    if isinstance(c, LaurentSeries):
        return c.is_zero_to_precision()
    return not c


def _vector_zero(v: PBWVector) -> bool:
    return all(_coef_ok(c) for c in v.terms.values())


def default_probes(module: ModuleContext, rng: random.Random, n_random=8, depth=4):
    """Cyclic vector, depth-<=2 monomials in the mode -1 generators, random vectors."""
    probes = [module.vacuum()]
    keys = sorted((-1, s, i) for (s, i) in module.creation_key_types())
    for a in range(len(keys)):
        probes.append(module.monomial([keys[a]]))
        for b in range(a, len(keys)):
            probes.append(module.monomial([keys[a], keys[b]]))
    for _ in range(n_random):
        probes.append(rand_vector(rng, module, depth, terms=1))
    return probes


# -- context builders ------------------------------------------------------------------------


def _affine(cfg, kind):
    return AffineContext(cfg.lie(), cfg.poly(), kind)


def _module(cfg, kind, level=None, f=None):
    lvl = cfg.level_scalar() if level is None else as_scalar(level)
    if kind in ("Mhat", "Vcheck"):
        return build_module(kind, cfg.lie(), cfg.poly(), lvl)
    if kind in ("VKl", "Vf"):
        return build_module(kind, level=lvl, f=f if f is not None else cfg.f_series())
    return build_module("Fock", level=lvl, f=f if f is not None else cfg.f_series())


def _trials(cfg, default):
    return cfg.trials if cfg.trials is not None else default


# =============================================================================
#  Lie-algebra level suites
# =============================================================================


def _lie_axioms(cfg, kind, default_trials=200):
    ctx = _affine(cfg, kind)
    anti = Check("antisymmetry")
    jac = Check("jacobi")
    n = _trials(cfg, default_trials)
    for t in range(n):
        rng = _rng(cfg, "axioms", t)
        x, y, z = (rand_affine_element(rng, ctx) for _ in range(3))
        s = ctx.bracket(x, y) + ctx.bracket(y, x)
        anti.record(s.is_zero(), lambda: {"x": str(x), "y": str(y), "got": str(s)})
        j = ctx.bracket(x, ctx.bracket(y, z)) + ctx.bracket(y, ctx.bracket(z, x)) + ctx.bracket(
            z, ctx.bracket(x, y)
        )
        jac.record(j.is_zero(), lambda: {"x": str(x), "y": str(y), "z": str(z), "got": str(j)})
    return [anti, jac]


def suite_jacobi_hatgp(cfg):
    return _lie_axioms(cfg, "hat")


def suite_jacobi_checkgp(cfg):
    return _lie_axioms(cfg, "check")


def _rand_kgp_element(rng, ctx: KgpContext, depth):
    x = ctx.zero()
    for _ in range(rng.randint(1, 2)):
        x = x + ctx.gen(
            rng.choice((PLAIN, COPY)), rng.randrange(ctx.base.dim), rng.randint(-3, 3), rand_truncated(rng, depth)
        )
    if rng.random() < 0.3:
        x = x + ctx.k(rng.randint(-3, 3), rand_truncated(rng, depth))
    return x


def _kgp_zero(ctx, x, check: Check, witness, min_weights=4):
    """Record whether x vanishes mod J0 within its certified window."""
    if not all(c.is_zero_to_precision() for c in x.terms.values()):
        check.record(False, lambda: dict(witness(), terms=ctx.format_element(x)))
        return
    red = reduce_mod_dR(x.central)
    weights = [a + n for n, f in x.central.items() for a in f.coeffs]
    if weights and red.window is not None and red.window - min(weights) < min_weights:
        check.precision(dict(witness(), window=red.window, lowest_weight=min(weights)))
        return
    check.record(red.is_zero, lambda: dict(witness(), obstruction=red.to_json()))


def suite_kgp_ideal(cfg):
    p = cfg.poly() if cfg.p is not None or cfg.beta is not None else elliptic_p(0)
    ctx = KgpContext(cfg.lie(), p)
    depth = cfg.trunc
    skew = Check("skew-defect-in-dR", window={"coefficient_depth": depth})
    jac = Check("jacobi-defect-in-dR", window={"coefficient_depth": depth})
    der = Check("derivation-law-mod-dR", window={"coefficient_depth": depth})
    n = _trials(cfg, 100)
    for t in range(n):
        rng = _rng(cfg, "kgp", t)
        x, y, z = (_rand_kgp_element(rng, ctx, depth) for _ in range(3))
        wit = lambda: {"x": ctx.format_element(x), "y": ctx.format_element(y), "z": ctx.format_element(z)}  # noqa: E731
        _kgp_zero(ctx, ctx.bracket(x, y) + ctx.bracket(y, x), skew, wit)
        j = ctx.bracket(x, ctx.bracket(y, z)) + ctx.bracket(y, ctx.bracket(z, x)) + ctx.bracket(z, ctx.bracket(x, y))
        _kgp_zero(ctx, j, jac, wit)
        d = ctx.derivation(ctx.bracket(x, y)) - ctx.bracket(ctx.derivation(x), y) - ctx.bracket(x, ctx.derivation(y))
        _kgp_zero(ctx, d, der, wit)
    # the spanning set of J0 reduces to zero, k t^0 too, k t^-1 does not
    span = Check("J0-spanning-set")
    for t in range(20):
        rng = _rng(cfg, "span", t)
        f = rand_poly(rng, -3, 3, terms=3)
        m = rng.randint(-3, 3)
        central = {m: f.derivative()}
        if m:
            central[m - 1] = central.get(m - 1, LaurentSeries.zero()) + f * m
        red = reduce_mod_dR({k: v for k, v in central.items() if v})
        span.record(red.is_zero, lambda: {"f": str(f), "n": m, "obstruction": red.to_json()})
    known = Check("known-members-and-nonmembers")
    r0 = reduce_mod_dR({0: LaurentSeries.one()})
    known.record(r0.is_zero, {"input": "k t^0", "obstruction": r0.to_json()})
    r1 = reduce_mod_dR({-1: LaurentSeries.one()})
    known.record(not r1.is_zero, {"input": "k t^-1", "obstruction": r1.to_json()})
    known.info = {"k t^0": r0.to_json(), "k t^-1": r1.to_json()}
    return [skew, jac, der, span, known]


def suite_derivation_checkgp(cfg):
    ctx = _affine(cfg, "check")
    law = Check("check-derivation-law")
    n = _trials(cfg, 200)
    for t in range(n):
        rng = _rng(cfg, "check-der", t)
        x, y = rand_affine_element(rng, ctx), rand_affine_element(rng, ctx)
        d = ctx.derivation(ctx.bracket(x, y)) - ctx.bracket(ctx.derivation(x), y) - ctx.bracket(x, ctx.derivation(y))
        law.record(d.is_zero(), lambda: {"x": str(x), "y": str(y), "defect": str(d)})
    kl = KlContext(cfg.level_scalar())
    klaw = Check("Kl-derivation-law")
    for t in range(n):
        rng = _rng(cfg, "kl-der", t)
        x = kl.bt(rng.randint(-5, 5), rand_scalar(rng)) + kl.ct(rng.randint(-5, 5), rand_scalar(rng))
        y = kl.bt(rng.randint(-5, 5), rand_scalar(rng)) + kl.bt(rng.randint(-5, 5), rand_scalar(rng))
        d = kl.derivation(kl.bracket(x, y)) - kl.bracket(kl.derivation(x), y) - kl.bracket(x, kl.derivation(y))
        klaw.record(d.is_zero(), lambda: {"x": str(x), "y": str(y), "defect": str(d)})
    return [law, klaw]


def suite_filtration(cfg):
    ctx = _affine(cfg, "check")
    chk = Check("bracket-respects-filtration")
    n = _trials(cfg, 200)
    for t in range(n):
        rng = _rng(cfg, "filt", t)
        x, y = rand_affine_element(rng, ctx), rand_affine_element(rng, ctx)
        b = ctx.bracket(x, y)
        dx, dy, db = ctx.filtration_degree(x), ctx.filtration_degree(y), ctx.filtration_degree(b)
        chk.record(db >= dx + dy, lambda: {"x": str(x), "y": str(y), "deg": [dx, dy, db]})
    return [chk]


def suite_oracle(cfg):
    out = []
    rng_m = 6
    for kind in ("hat", "check"):
        ctx = _affine(cfg, kind)
        chk = Check(f"{kind}-closed-form-vs-delta-expansion", window={"modes": [-rng_m, rng_m]})
        dim = ctx.base.dim
        for sx in (PLAIN, COPY):
            for sy in (PLAIN, COPY):
                for i in range(dim):
                    for j in range(dim):
                        table = affine_bracket_table_oracle(ctx, sx, i, sy, j, rng_m)
                        for (m, n), want in sorted(table.items()):
                            k1, k2 = (m, sx, i), (n, sy, j)
                            got = ctx.bracket_keys(k1, k2)
                            ok = got[0] == want[0] and got[1] == want[1]
                            chk.record(
                                ok,
                                lambda: {
                                    "keys": [ctx.key_name(k1), ctx.key_name(k2)],
                                    "closed_form": [str(got[0]), str(got[1])],
                                    "oracle": [str(want[0]), str(want[1])],
                                },
                            )
        out.append(chk)
    f = cfg.f_series("1+z")
    hf = HfContext(f)
    chk = Check("Hf-closed-form-vs-delta-expansion", window={"modes": [-rng_m, rng_m]})
    for m in range(-rng_m, rng_m + 1):
        for n in range(-rng_m, rng_m + 1):
            try:
                got, want = hf.bracket_value(m, n), hf_bracket_oracle(f, m, n)
            except PrecisionError as e:
                chk.precision({"m": m, "n": n, "error": str(e)})
                continue
            chk.record(got == want, lambda: {"m": m, "n": n, "closed_form": str(got), "oracle": str(want)})
    out.append(chk)
    kl = KlContext(cfg.level_scalar())
    chk = Check("Kl-closed-form-vs-delta-expansion", window={"modes": [-rng_m, rng_m]})
    for m in range(-rng_m, rng_m + 1):
        for n in range(-rng_m, rng_m + 1):
            got = kl.bracket_keys((m, BETA, 0), (n, BETA, 0))[0]
            got = {k[0]: c for k, c in got.items()}
            want = kl_bracket_oracle(kl.level, m, n)
            chk.record(got == want, lambda: {"m": m, "n": n, "closed_form": str(got), "oracle": str(want)})
    out.append(chk)
    return out


# =============================================================================
#  module suites
# =============================================================================


def _module_law_check(cfg, M: ModuleContext, name: str, n: int, depth=4, modes=(-4, 4)):
    chk = Check(name, window={"modes": list(modes), "probe_depth": depth})
    alg = M.algebra
    for t in range(n):
        rng = _rng(cfg, name, t)
        k1, k2 = rand_key(rng, M, modes), rand_key(rng, M, modes)
        w = rand_vector(rng, M, depth)
        try:
            lhs = M.apply_key(k1, M.apply_key(k2, w)) - M.apply_key(k2, M.apply_key(k1, w))
            x = _key_element(alg, k1)
            y = _key_element(alg, k2)
            rhs = M.apply_element(alg.bracket(x, y), w)
        except PrecisionError as e:
            chk.precision({"keys": [M.key_name(k1), M.key_name(k2)], "error": str(e)})
            continue
        chk.record(
            (lhs - rhs).is_zero() if not M.series_coefficients else _vector_zero(lhs - rhs),
            lambda: {
                "keys": [M.key_name(k1), M.key_name(k2)],
                "w": str(w),
                "commutator": str(lhs),
                "bracket_action": str(rhs),
            },
        )
    return chk


def _key_element(alg, key):
    from .currents import CurrentElement

    return CurrentElement._raw(alg, {key: alg.one_coef}, alg.zero_coef)


def suite_module_law(cfg):
    n = _trials(cfg, 200)
    depth = max(cfg.depth, 4)
    out = []
    lvl = cfg.level_scalar()
    out.append(_module_law_check(cfg, _module(cfg, "VKl"), "module-law-VKl", n, depth))
    for fs in ("1", "1+z", "z^2"):
        out.append(_module_law_check(cfg, _module(cfg, "Vf", f=parse_series(fs)), f"module-law-Vf[f={fs}]", n, depth))
    out.append(_module_law_check(cfg, _module(cfg, "Vcheck"), "module-law-Vcheck", n, depth))
    out.append(_module_law_check(cfg, _module(cfg, "Mhat"), "module-law-Mhat", n, depth))
    fock_f = cfg.f_series("1+z")
    if not lvl or fock_f.val >= 0:
        out.append(_module_law_check(cfg, _module(cfg, "Fock", f=fock_f), f"module-law-Fock[f={fock_f}]", n, depth))
    return out


def _pbw_oracle(M: ModuleContext, word, rng) -> dict:
    """Straighten a word by rewriting randomly chosen adjacent pairs.

    Independent of the engine's recursion.  Scalar-acting keys are pulled
    out, a word ending in an annihilator dies, and otherwise one of the
    adjacent pairs ``x y`` with x an annihilator in front of a creator, or
    two creators out of order, is picked at random and rewritten as
    ``y x + [x, y]``.
    """
    alg = M.algebra
    pending = {tuple(word): M.one_coef}
    done: dict = {}
    while pending:
        w, c = pending.popitem()
        if not c:
            continue
        scalar_at = next((i for i, k in enumerate(w) if M.scalar_action(k) is not None), None)
        if scalar_at is not None:
            _acc(pending, w[:scalar_at] + w[scalar_at + 1 :], c * M.scalar_action(w[scalar_at]))
            continue
        if w and not M.is_creation(w[-1]):
            continue
        cre = [M.is_creation(k) for k in w]
        moves = [
            i
            for i in range(len(w) - 1)
            if (not cre[i] and cre[i + 1]) or (cre[i] and cre[i + 1] and w[i] > w[i + 1])
        ]
        if not moves:
            _acc(done, w, c)
            continue
        i = rng.choice(moves)
        x, y = w[i], w[i + 1]
        _acc(pending, w[:i] + (y, x) + w[i + 2 :], c)
        terms, central = alg.bracket_keys(x, y)
        for k, v in terms.items():
            _acc(pending, w[:i] + (k,) + w[i + 2 :], c * v)
        if central:
            _acc(pending, w[:i] + w[i + 2 :], c * central * M.level)
    return {k: v for k, v in done.items() if v}


def _acc(d, k, v):
    if k in d:
        d[k] = d[k] + v
    else:
        d[k] = v


def suite_vacuum_module(cfg):
    V = _module(cfg, "Vcheck")
    n = _trials(cfg, 100)
    out = [_module_law_check(cfg, V, "module-law-Vcheck", n, max(cfg.depth, 4))]

    ann = Check("vacuum-annihilation")
    for (s, i) in V.creation_key_types():
        for m in range(0, 6):
            r = V.apply_key((m, s, i), V.vacuum())
            ann.record(not r, {"key": V.key_name((m, s, i)), "got": str(r)})
    out.append(ann)

    dlaw = Check("translation-commutator-law")
    for t in range(n):
        rng = _rng(cfg, "dlaw", t)
        key = rand_key(rng, V)
        w = rand_vector(rng, V, cfg.depth)
        lhs = V.apply_D(V.apply_key(key, w)) - V.apply_key(key, V.apply_D(w))
        rhs = V.apply_key((key[0] - 1, key[1], key[2]), w).scale(-key[0])
        dlaw.record(lhs == rhs, lambda: {"key": V.key_name(key), "w": str(w), "lhs": str(lhs), "rhs": str(rhs)})
    dlaw.record(not V.apply_D(V.vacuum()), {"D(1)": "nonzero"})
    out.append(dlaw)

    pbw = Check("pbw-faithfulness")
    for t in range(n):
        rng = _rng(cfg, "pbw", t)
        word = [rand_key(rng, V, (-3, 2)) for _ in range(rng.randint(1, 6))]
        a = V.apply_word(word, V.vacuum()).terms
        b = _pbw_oracle(V, word, rng)
        pbw.record(a == b, lambda: {"word": [V.key_name(k) for k in word], "engine": str(a), "swap_order": str(b)})
    out.append(pbw)

    reach = Check("basis-reachable-from-cyclic-vector")
    for mono in V.pbw_basis(cfg.depth, 2):
        v = V.monomial(mono)
        reach.record(v.terms == {mono: V.one_coef}, {"monomial": V.format_mono(mono), "got": str(v)})
    out.append(reach)

    # the restrictedness certificate is part of the vacuum-module statement
    out.extend(suite_restricted(cfg))
    return out


def suite_restricted(cfg):
    out = []
    n = _trials(cfg, 60)
    for kind in ("Vcheck", "Mhat"):
        M = _module(cfg, kind)
        chk = Check(f"restricted-{kind}")
        tight = Check(f"restricted-{kind}-tightness")
        for t in range(n):
            rng = _rng(cfg, f"restr-{kind}", t)
            v = rand_vector(rng, M, cfg.depth)
            s, i = rng.choice(M.creation_key_types())
            res = M.restrictedness_bound(s, i, v)
            N = res["bound"]
            # modes N .. N+4 (and the a priori bound) annihilate v
            zero_above = all(not M.apply_key((m, s, i), v) for m in range(N, res["a_priori"] + 5))
            chk.record(
                zero_above and N <= res["a_priori"],
                lambda: {"v": str(v), "key": M.key_name((0, s, i)), "bound": res},
            )
            if N > 0:
                tight.record(bool(M.apply_key((N - 1, s, i), v)), {"v": str(v), "bound": res})
        out += [chk, tight]
    return out


# =============================================================================
#  vertex-calculus suites
# =============================================================================


def _ops_equal(S, T, probes, lo, hi):
    """First (probe, mode) where two operator series differ, or None."""
    for v in probes:
        for m in range(lo, hi + 1):
            a, b = S.mode(m, v), T.mode(m, v)
            if not _vector_zero(a - b):
                return {"probe": str(v), "mode": m, "lhs": str(a), "rhs": str(b)}
    return None


def _polynomial_product_checks(cfg, level, beta, prefix=""):
    base = cfg.lie()
    p = elliptic_p(beta) if cfg.p is None or beta is not None else cfg.poly()
    M = build_module("Mhat", base, p, level)
    rng = _rng(cfg, f"polyprod-probes-{level}-{beta}", 0)
    probes = default_probes(M, rng, n_random=4, depth=2)
    window = (-8, 4)
    tag = f"{prefix}[level={level},p={p}]"
    prod = Check(f"polynomial-product{tag}", window={"modes": list(window)})
    e_i, f_i = base.index.get("e"), base.index.get("f")
    pairs = [(i, j) for i in range(base.dim) for j in range(base.dim)]
    for i, j in pairs:
        psi = NthProduct(Field(M, COPY, i), Field(M, COPY, j), 1)
        want = Multiplier(M, p * (as_scalar(level) * base.form_basis(i, j)))
        w = _ops_equal(psi, want, probes, *window)
        prod.record(w is None, lambda: dict(w, pair=[base.basis_names[i], base.basis_names[j]]))
    third = Check(f"polynomial-third-product{tag}", window={"modes": list(window)})
    P = Multiplier(M, p)
    got = NthProduct(P, Identity(M), -3)
    want = Multiplier(M, p.taylor(2))
    w = _ops_equal(got, want, probes, *window)
    third.record(w is None, lambda: w)
    third.info = {"p(x)_{-3} 1_W": str(p.taylor(2).to_string("x"))}
    # the n-th products for n >= 0 agree with the finite commutator formula
    fin = Check(f"nth-product-finite-oracle{tag}", window={"modes": [-4, 3], "n": [0, 3], "probes": 4})
    for i, j in pairs:
        for sx in (PLAIN, COPY):
            A, B = Field(M, sx, i), Field(M, COPY, j)
            for nn in range(0, 4):
                S = NthProduct(A, B, nn)
                for v in probes[:4]:
                    for m in range(-4, 4):
                        a, b = S.mode(m, v), commutator_sum_oracle(A, B, nn, m, v)
                        fin.record(a == b, lambda: {"n": nn, "m": m, "probe": str(v), "residue": str(a), "finite": str(b)})
    return [prod, third, fin], (M, probes, e_i, f_i)


def suite_polynomial_product(cfg):
    beta = parse_scalar(cfg.beta) if cfg.beta is not None else (None if cfg.p else ZERO)
    checks, _ = _polynomial_product_checks(cfg, cfg.level_scalar(), beta)
    return checks


def suite_nogo(cfg):
    beta = parse_scalar(cfg.beta) if cfg.beta is not None else (None if cfg.p else ZERO)
    level = cfg.level_scalar()
    base = cfg.lie()
    p = elliptic_p(beta) if beta is not None else cfg.poly()
    M = build_module("Mhat", base, p, level)
    e, f = base.index["e"], base.index["f"]
    form = base.form_basis(e, f)
    psi = NthProduct(Field(M, COPY, e), Field(M, COPY, f), 1)
    rng = _rng(cfg, "nogo-probes", 0)
    probes = default_probes(M, rng, n_random=4, depth=3)
    window = (-8, 4)
    expected = p.derivative() * (level * form)
    via_vacuum = NthProduct(psi, Identity(M), -2)
    chk = Check("translation-of-polynomial-product", window={"modes": list(window)})
    w = _ops_equal(via_vacuum, Multiplier(M, expected), probes, *window)
    chk.record(w is None, lambda: dict(w, route="psi_{-2} 1_W"))
    w = _ops_equal(Derivative(psi), Multiplier(M, expected), probes, *window)
    chk.record(w is None, lambda: dict(w, route="d/dx psi"))
    obstruction = Check("obstruction-nonzero-iff-level-nonzero")
    nonzero = any(via_vacuum.mode(m, M.vacuum()) for m in range(*window))
    obstruction.record(nonzero == bool(level), {"level": str(level), "obstruction_nonzero": nonzero})
    obstruction.info = {
        "obstruction": expected.to_string("x"),
        "level": str(level),
        "vacuum_module_possible": not nonzero,
    }
    return [chk, obstruction]


def _locality_checks(cfg, kind, level=None):
    M = _module(cfg, kind, level)
    base = M.algebra.base
    rng = _rng(cfg, f"locality-probes-{kind}", 0)
    probes = default_probes(M, rng, n_random=8, depth=4)
    window = (-2, 2)
    chk = Check(f"locality-{kind}", window={"modes": list(window), "probes": len(probes)})
    matrix = {}
    types = M.creation_key_types()
    for (sa, ia) in types:
        for (sb, ib) in types:
            A, B = Field(M, sa, ia), Field(M, sb, ib)
            k, wit = locality_order(A, B, probes, 6, window)
            name = f"{M.key_name((0, sa, ia))[:-3]}|{M.key_name((0, sb, ib))[:-3]}"
            matrix[name] = k
            # expectation from the bracket table
            form = base.form_basis(ia, ib)
            br = base.bracket_basis(ia, ib)
            if sa == sb and form and M.level:
                want = 2
            elif br:
                want = 1
            else:
                want = 0
            ok = k is not None and k <= 2 and k == want
            chk.record(ok, lambda: {"pair": name, "order": k, "expected": want, "witness": wit})
    chk.info = {"matrix": matrix}
    return chk


def suite_locality(cfg):
    return [_locality_checks(cfg, "Vcheck"), _locality_checks(cfg, "Mhat")]


def _vertex_axiom_trial(cfg, V, Y, rng, depth):
    """Y(f u, x)(g v) against f(z+x) g(z) Y(u,x)v on an 8 x 8 window."""
    f, g = rand_truncated(rng, depth), rand_truncated(rng, depth)
    u = PBWVector(V, {rand_monomial(rng, V, 2, (-2, -1)): V.one_coef})
    v = PBWVector(V, {rand_monomial(rng, V, 2, (-2, -1)): V.one_coef})
    Yu = Y.Y(u)
    N = Yu.bound(v)
    lo, hi = N - 8, N - 1
    lhs_map = Y.Y(u.scale(f))
    lhs_res = NthProduct(Y.Y(V.vacuum(f)), Yu, -1)
    gv = v.scale(g)
    base = {k: Yu.mode(k, v) for k in range(lo, N)}
    bad = None
    nonzero = False
    zlo, zcap = None, INF
    for m in range(lo, hi + 1):
        # f(z+x) g(z) Y(u,x)v: coefficient of x^{-m-1} is sum_j f^{(j)}/j! g Y_{m+j} v
        rhs = V.zero()
        for j in range(0, N - m):
            rhs = rhs + base[m + j].scale(f.taylor(j) * g)
        nonzero = nonzero or bool(rhs)
        for route, S in (("map", lhs_map), ("residue", lhs_res)):
            got = S.mode(m, gv)
            diff = got - rhs
            for c in list(got.terms.values()) + list(rhs.terms.values()):
                if c.coeffs:
                    zlo = min(zlo, c.val) if zlo is not None else c.val
                zcap = min(zcap, c.cap)
            if not _vector_zero(diff) and bad is None:
                bad = {"f": str(f), "g": str(g), "u": str(u), "v": str(v), "mode": m, "route": route, "lhs": str(got), "rhs": str(rhs)}
    return bad, nonzero, (zlo, zcap)


def _type_zero_trial(cfg, V, M, YW, rng, depth):
    """Y_W(f s, x)w = f(x) Y_W(s, x)w with s = g u + v, via the residue route."""
    f, g = rand_truncated(rng, depth, (0, 2)), rand_truncated(rng, depth, (0, 2))
    u = PBWVector(V, {rand_monomial(rng, V, 2, (-2, -1)): V.one_coef})
    v = PBWVector(V, {rand_monomial(rng, V, 2, (-2, -1)): V.one_coef})
    w = rand_vector(rng, M, 2, terms=1)
    s = u.scale(g) + v
    Ys = YW.Y(s)
    N = Ys.bound(w)
    lo, hi = N - 8, N - 1
    lhs_res = NthProduct(Multiplier(M, f), Ys, -1)
    lhs_map = YW.Y(s.scale(f))
    base = {k: Ys.mode(k, w) for k in range(lo + f.val, N)}
    bad = None
    nonzero = False
    for m in range(lo, hi + 1):
        rhs = M.zero()
        for j in range(f.val, N - m):
            c = f.coeff(j)
            if c:
                rhs = rhs + base[m + j].scale(c)
        nonzero = nonzero or bool(rhs)
        for route, S in (("map", lhs_map), ("residue", lhs_res)):
            got = S.mode(m, w)
            if got != rhs and bad is None:
                bad = {"f": str(f), "g": str(g), "u": str(u), "v": str(v), "w": str(w), "mode": m, "route": route, "lhs": str(got), "rhs": str(rhs)}
    return bad, nonzero, f.cap - f.val


def suite_vertex_algebra(cfg):
    V = _module(cfg, "Vcheck")
    Y = vertex_operator_map(V)
    out = []
    n = _trials(cfg, 100)

    vac = Check("vacuum-axiom", window={"modes": [-6, 5]})
    creation = Check("creation-property")
    rng0 = _rng(cfg, "vertex-probes", 0)
    probes = default_probes(V, rng0, n_random=4, depth=3)
    Y1 = Y.Y(V.vacuum())
    for w in probes:
        for m in range(-6, 6):
            got = Y1.mode(m, w)
            vac.record(got == (w if m == -1 else V.zero()), {"probe": str(w), "mode": m, "got": str(got)})
    for mono in V.pbw_basis(2, 2):
        v = PBWVector(V, {mono: V.one_coef})
        Yv = Y.Y(v)
        ok = Yv.mode(-1, V.vacuum()) == v and all(not Yv.mode(m, V.vacuum()) for m in range(0, 4))
        creation.record(ok, {"v": str(v), "Y(v)_-1 1": str(Yv.mode(-1, V.vacuum()))})
    out += [vac, creation]

    ax = Check("shift-axiom", window={"x_modes": 8, "z_exponents_min": None})
    zspan = []
    for t in range(n):
        rng = _rng(cfg, "shift-axiom", t)
        try:
            bad, nonzero, (zlo, zcap) = _vertex_axiom_trial(cfg, V, Y, rng, cfg.trunc)
        except PrecisionError as e:
            ax.precision({"trial": t, "error": str(e)})
            continue
        span = (zcap - zlo) if zlo is not None else INF
        zspan.append(span)
        if span < 8:
            ax.precision({"trial": t, "z_window": [zlo, zcap]})
            continue
        _count_nontrivial(ax, nonzero)
        ax.record(bad is None, bad)
    ax.window = {"x_modes": 8, "z_exponents_min": min(zspan) if zspan else None}
    out.append(ax)

    skew = Check("skew-symmetry", window={"modes": [-4, 3]})
    gens = [V.monomial([(-1, s, i)]) for (s, i) in V.creation_key_types()]
    for u in gens:
        for v in gens:
            for m in range(-4, 4):
                d = skew_symmetry_defect(Y, u, v, m)
                skew.record(not d, {"u": str(u), "v": str(v), "mode": m, "defect": str(d)})
    out.append(skew)

    borch = Check("borcherds-identity", window={"p_q": [-3, 1], "r": [-2, 2]})
    for t in range(max(n // 4, 1)):
        rng = _rng(cfg, "borcherds", t)
        u = rand_vector(rng, V, 2, terms=1, min_len=1)
        v = rand_vector(rng, V, 2, terms=1, min_len=1)
        w = rand_vector(rng, V, 1, terms=1, min_len=1)
        p, q, r = _borcherds_modes(rng)
        try:
            lhs_b, rhs_b = borcherds_defect(Y, Y, u, v, w, p, q, r, sides=True)
            d = lhs_b - rhs_b
            _count_nontrivial(borch, lhs_b)
        except PrecisionError as e:
            borch.precision({"trial": t, "error": str(e)})
            continue
        borch.record(_vector_zero(d), lambda: {"u": str(u), "v": str(v), "w": str(w), "pqr": [p, q, r], "defect": str(d)})
    out.append(borch)
    out.append(_locality_checks(cfg, "Vcheck"))
    return out


def _commutator_transfer(Ysrc, Ytgt, probes, name, window=(-3, 3)):
    """``[Y_W(u)_m, Y_W(v)_n] = sum_i C(m,i) Y_W(u_i v)_{m+n-i}`` for generator states.

    ``u_i v`` is computed in the source through its own state-field map, for
    every i below the truncation certificate.
    """
    V, W = Ysrc.source, Ytgt.target
    lo, hi = window
    chk = Check(name, window={"modes": [lo, hi], "probes": len(probes)})
    table = {}
    gens = [(s, i) for (s, i) in V.creation_key_types()]
    for (sa, ia) in gens:
        for (sb, ib) in gens:
            u, v = V.monomial([(-1, sa, ia)]), V.monomial([(-1, sb, ib)])
            Yu_src = Ysrc.Y(u)
            comps = {i: Yu_src.mode(i, v) for i in range(0, max(Yu_src.bound(v), 0))}
            comps = {i: c for i, c in comps.items() if c}
            key = f"{V.key_name((-1, sa, ia))}|{V.key_name((-1, sb, ib))}"
            table[key] = {str(i): str(c) for i, c in comps.items()}
            A, B = Ytgt.Y(u), Ytgt.Y(v)
            for w in probes:
                for m in range(lo, hi + 1):
                    for n in range(lo, hi + 1):
                        lhs = A.mode(m, B.mode(n, w)) - B.mode(n, A.mode(m, w))
                        rhs = W.zero()
                        for i, c in comps.items():
                            b = gen_binom(m, i)
                            if b:
                                rhs = rhs + Ytgt.Y(c).mode(m + n - i, w).scale(b)
                        _count_nontrivial(chk, lhs)
                        chk.record(
                            _vector_zero(lhs - rhs),
                            lambda: {"pair": key, "m": m, "n": n, "probe": str(w), "lhs": str(lhs), "rhs": str(rhs)},
                        )
    chk.info["u_i v"] = table
    return chk


def suite_type_zero_module(cfg):
    V = _module(cfg, "Vcheck")
    M = _module(cfg, "Mhat")
    Y = vertex_operator_map(V)
    YW = type_zero_map(V, M)
    n = _trials(cfg, 100)
    depth = cfg.depth
    out = [_module_law_check(cfg, M, "module-law-Mhat", n, max(depth, 4))]
    rng0 = _rng(cfg, "type-zero-probes", 0)
    probes = default_probes(M, rng0, n_random=4, depth=depth)

    gen = Check("generators-act-by-fields", window={"modes": [-5, 5]})
    for (s, i) in V.creation_key_types():
        got = YW.Y(V.monomial([(-1, s, i)]))
        w = _ops_equal(got, Field(M, s, i), probes, -5, 5)
        gen.record(w is None, lambda: dict(w, generator=V.key_name((-1, s, i))))
    out.append(gen)

    tz = Check("type-zero-axiom", window={"x_modes": 8})
    fdepths = []
    for t in range(n):
        rng = _rng(cfg, "type-zero", t)
        try:
            bad, nonzero, fd = _type_zero_trial(cfg, V, M, YW, rng, cfg.trunc)
        except PrecisionError as e:
            tz.precision({"trial": t, "error": str(e)})
            continue
        fdepths.append(fd)
        if fd < 8:
            tz.precision({"trial": t, "f_known_coefficients": fd})
            continue
        _count_nontrivial(tz, nonzero)
        tz.record(bad is None, bad)
    tz.window = {"x_modes": 8, "f_known_coefficients_min": min(fdepths) if fdepths else None}
    out.append(tz)

    out.append(_commutator_transfer(Y, YW, probes[:10], "commutator-transfer"))

    hom = Check("homomorphism-two-routes", window={"modes": [-6, 2]})
    for t in range(max(n // 2, 1)):
        rng = _rng(cfg, "hom", t)
        word = [rand_key(rng, V, (-2, 2)) for _ in range(rng.randint(1, 3))]
        f = rand_poly(rng, 0, 3)
        state = V.apply_word(word, V.vacuum(f))
        route_a = YW.Y(state)
        route_b = Multiplier(M, f)
        for (mode, s, i) in reversed(word):
            route_b = NthProduct(Field(M, s, i), route_b, mode)
        w = _ops_equal(route_a, route_b, probes[:6], -6, 2)
        hom.record(w is None, lambda: dict(w, word=[V.key_name(k) for k in word], f=str(f)))
    out.append(hom)

    borch = Check("borcherds-identity-on-module", window={"p_q": [-3, 1], "r": [-2, 2]})
    for t in range(max(n // 4, 1)):
        rng = _rng(cfg, "type-zero-borcherds", t)
        u = rand_vector(rng, V, 2, terms=1, min_len=1)
        v = rand_vector(rng, V, 2, terms=1, min_len=1)
        w = rand_vector(rng, M, 2, terms=1, min_len=1)
        p, q, r = _borcherds_modes(rng)
        lhs_b, rhs_b = borcherds_defect(Y, YW, u, v, w, p, q, r, sides=True)
        d = lhs_b - rhs_b
        _count_nontrivial(borch, lhs_b)
        borch.record(not d, lambda: {"u": str(u), "v": str(v), "w": str(w), "pqr": [p, q, r], "defect": str(d)})
    out.append(borch)
    return out


def _specialization_check(cfg, f, level, rng_m=6):
    kl, hf = KlContext(level), HfContext(f)
    chk = Check(f"specialization[f={f}]", window={"modes": [-rng_m, rng_m]})
    for m in range(-rng_m, rng_m + 1):
        for n in range(-rng_m, rng_m + 1):
            x = kl.bracket(kl.bt(m), kl.bt(n))
            got = kl.specialize(x, f) if level else ZERO
            want = hf.bracket_value(m, n) * level
            chk.record(got == want, {"m": m, "n": n, "specialized": str(got), "Hf": str(want)})
    return chk


def suite_hf_modules(cfg):
    out = []
    level = cfg.level_scalar()
    fs = [cfg.f_series()] if cfg.f is not None else [parse_series("1"), parse_series("1+z")]
    n = _trials(cfg, 100)
    for f in fs:
        out.append(_specialization_check(cfg, f, level))
        K = build_module("VKl", level=level)
        F = build_module("Fock", level=level, f=f)
        YK = vertex_operator_map(K)
        YF = heisenberg_map(K, F)
        borch = Check(f"VKl-module-law-on-Fock[f={f}]", window={"p_q": [-3, 1], "r": [-2, 2]})
        for t in range(n):
            rng = _rng(cfg, f"hf-{f}", t)
            u = rand_vector(rng, K, 2, terms=1, min_len=1)
            v = rand_vector(rng, K, 2, terms=1, min_len=1)
            w = rand_vector(rng, F, 2, terms=1, min_len=1)
            p, q, r = _borcherds_modes(rng)
            lhs_b, rhs_b = borcherds_defect(YK, YF, u, v, w, p, q, r, sides=True)
            d = lhs_b - rhs_b
            _count_nontrivial(borch, lhs_b)
            borch.record(not d, lambda: {"u": str(u), "v": str(v), "w": str(w), "pqr": [p, q, r], "defect": str(d)})
        out.append(borch)
        probes = default_probes(F, _rng(cfg, "hf-probes", 0), n_random=4, depth=3)
        out.append(_commutator_transfer(YK, YF, probes, f"VKl-commutator-formula-on-Fock[f={f}]"))
        gen = Check(f"generators-act-by-fields[f={f}]", window={"modes": [-5, 5]})
        w = _ops_equal(YF.Y(K.monomial([(-1, BETA, 0)])), Field(F, BETA, 0), probes, -5, 5)
        gen.record(w is None, w)
        w = _ops_equal(YF.Y(K.monomial([(-1, CTILDE, 0)])), Multiplier(F, f), probes, -5, 5)
        gen.record(w is None, w)
        out.append(gen)
    return out


def suite_heisenberg(cfg):
    out = []
    level = cfg.level_scalar()
    fs = [cfg.f_series()] if cfg.f is not None else [parse_series("1"), parse_series("1+z")]
    n = _trials(cfg, 40)
    for f in fs:
        Vf = build_module("Vf", level=level, f=f)
        F = build_module("Fock", level=level, f=f)
        Yv = vertex_operator_map(Vf)
        YF = heisenberg_map(Vf, F)
        borch = Check(f"Vf-type-zero-module-law[f={f}]", window={"p_q": [-3, 1], "r": [-2, 2]})
        tz = Check(f"Vf-type-zero-axiom[f={f}]", window={"x_modes": 8})
        rel = Check(f"defining-relation[f={f}]", window={"modes": [-6, 5]})
        probes = default_probes(F, _rng(cfg, "heis-probes", 0), n_random=4, depth=3)
        # f(t) 1 = ct_{-1} 1 maps to f(x)
        lhs = YF.Y(Vf.vacuum(f))
        w = _ops_equal(lhs, Multiplier(F, f), probes, -6, 5)
        rel.record(w is None, w)
        via_ct = Vf.apply_key((-1, CTILDE, 0), Vf.vacuum())
        rel.record(via_ct == Vf.vacuum(f), {"ct(-1) 1": str(via_ct)})
        for t in range(n):
            rng = _rng(cfg, f"heis-{f}", t)
            u = rand_vector(rng, Vf, 2, terms=1, min_len=1)
            v = rand_vector(rng, Vf, 2, terms=1, min_len=1)
            w = rand_vector(rng, F, 2, terms=1, min_len=1)
            p, q, r = _borcherds_modes(rng)
            try:
                lhs_b, rhs_b = borcherds_defect(Yv, YF, u, v, w, p, q, r, sides=True)
                d = lhs_b - rhs_b
                _count_nontrivial(borch, lhs_b)
            except PrecisionError as e:
                borch.precision({"trial": t, "error": str(e)})
                continue
            borch.record(not d, lambda: {"u": str(u), "v": str(v), "w": str(w), "pqr": [p, q, r], "defect": str(d)})
            g = rand_poly(rng, 0, 3)
            s = u
            Ys = YF.Y(s)
            N = Ys.bound(w)
            res = NthProduct(Multiplier(F, g), Ys, -1)
            direct = YF.Y(s.scale(g))
            bad = None
            nonzero = False
            for m in range(N - 8, N):
                want = F.zero()
                for j, c in g.coeffs.items():
                    want = want + Ys.mode(m + j, w).scale(c)
                for route, S in (("residue", res), ("map", direct)):
                    got = S.mode(m, w)
                    if got != want and bad is None:
                        bad = {"g": str(g), "u": str(u), "w": str(w), "mode": m, "route": route, "lhs": str(got), "rhs": str(want)}
                nonzero = nonzero or bool(want)
            _count_nontrivial(tz, nonzero)
            tz.record(bad is None, bad)
        out += [rel, borch, tz, _commutator_transfer(Yv, YF, probes, f"Vf-commutator-formula-on-Fock[f={f}]")]
    return out


SUITES = {
    "jacobi-hatgp": suite_jacobi_hatgp,
    "jacobi-checkgp": suite_jacobi_checkgp,
    "kgp-ideal": suite_kgp_ideal,
    "derivation-checkgp": suite_derivation_checkgp,
    "filtration": suite_filtration,
    "restricted": suite_restricted,
    "lpoly": suite_polynomial_product,
    "nogo": suite_nogo,
    "vacuum-module": suite_vacuum_module,
    "vertex-algebra": suite_vertex_algebra,
    "tmain": suite_type_zero_module,
    "hf-modules": suite_hf_modules,
    "heisenberg": suite_heisenberg,
    "oracle": suite_oracle,
    "locality": suite_locality,
    "module-law": suite_module_law,
}


def run_suite(cfg: SuiteConfig, timing: bool = True) -> dict:
    """Run one suite and return its report as a JSON-ready dict."""
    if cfg.suite not in SUITES:
        raise KeyError(f"unknown suite {cfg.suite!r}; choose from {sorted(SUITES)}")
    start = time.perf_counter()
    checks = SUITES[cfg.suite](cfg)
    report = {
        "suite": cfg.suite,
        "config": cfg.echo(),
        "status": worst_status(c.status for c in checks),
        "checks": [c.to_json() for c in checks],
    }
    if timing:
        report["wall_time"] = round(time.perf_counter() - start, 3)
    return report
