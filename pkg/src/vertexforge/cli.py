"""Command-line front end: ``vertexforge <command> ...``.

Exit codes: 0 success, 1 a verification failed (or could not be certified),
2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .currents import COPY, PLAIN, AffineContext, HfContext, KgpContext, KlContext, elliptic_p, reduce_mod_dR
from .lie import load_algebra
from .modules import build_module
from .scalars import parse_scalar
from .series import PrecisionError, default_trunc, parse_series
from .suites import SUITES, SuiteConfig, _locality_checks, run_suite
from .vertex import Field, Identity, Multiplier, NthProduct, locality_order, type_zero_map, vertex_operator_map

MODULE_KINDS = {"vcheck": "Vcheck", "mhat": "Mhat", "vkl": "VKl", "vf": "Vf", "fock": "Fock"}
FAMILIES = ("hat", "check", "kgp", "hf", "kl")


class UsageError(Exception):
    pass


# -- shared flag handling ---------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("configuration")
    g.add_argument("--algebra", default="sl2", help="built-in name (sl2, abelian) or JSON spec file")
    g.add_argument("--beta", default=None, help="sets p = z^3 - 2*beta*z^2 + z")
    g.add_argument("--p", default=None, help="polynomial p, e.g. 'z^3+z' (overrides --beta)")
    g.add_argument("--level", default="1", help="level l (Gaussian rational)")
    g.add_argument("--f", default=None, help="series f for the Heisenberg families")
    g.add_argument("--trunc", type=int, default=None, help="series truncation depth (default 16 or $VERTEXFORGE_TRUNC)")
    g.add_argument("--depth", type=int, default=3, help="probe / PBW depth")
    g.add_argument("--trials", type=int, default=None, help="number of randomised trials")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--json", action="store_true", help="machine-readable output")
    return p


def _poly(args):
    if args.p is not None:
        return parse_series(args.p)
    return elliptic_p(parse_scalar(args.beta or "0"))


def _trunc(args) -> int:
    return args.trunc if args.trunc is not None else default_trunc()


def _family_ctx(args, family):
    if family in ("hat", "check"):
        return AffineContext(load_algebra(args.algebra), _poly(args), family)
    if family == "kgp":
        return KgpContext(load_algebra(args.algebra), _poly(args))
    if family == "hf":
        return HfContext(parse_series(args.f or "1"))
    if family == "kl":
        return KlContext(parse_scalar(args.level))
    raise UsageError(f"unknown family {family!r}")


def _module(args, kind):
    kind = MODULE_KINDS.get(kind.lower())
    if kind is None:
        raise UsageError(f"unknown module {kind!r}; choose from {sorted(MODULE_KINDS)}")
    level = parse_scalar(args.level)
    if kind in ("Vcheck", "Mhat"):
        return build_module(kind, load_algebra(args.algebra), _poly(args), level)
    return build_module(kind, level=level, f=parse_series(args.f or "1"))


def _emit(args, payload, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# -- commands ------------------------------------------------------------------------------------


def cmd_check_lie(args):
    rep = load_algebra(args.algebra).validate()
    lines = [f"{rep.algebra}: {'ok' if rep.ok else 'FAILED'}"]
    for e in rep.entries:
        extra = f"  witness={e['witness']}" if "witness" in e else ""
        lines.append(f"  {e['axiom']:<15} {e['status']}{extra}")
    _emit(args, rep.to_json(), "\n".join(lines))
    return 0 if rep.ok else 1


def cmd_bracket(args):
    ctx = _family_ctx(args, args.family)
    x, y = ctx.parse(args.x), ctx.parse(args.y)
    b = ctx.bracket(x, y)
    payload = {"x": args.x, "y": args.y, "bracket": ctx.element_json(b)}
    text = ctx.format_element(b)
    if args.family == "kgp":
        red = reduce_mod_dR(b.central)
        payload["central_mod_dR"] = red.to_json()
        text += f"\ncentral part mod dR: {'0' if red.is_zero else red.to_json()['obstructions']}"
    _emit(args, payload, text)
    return 0


def cmd_reduce_dr(args):
    ctx = KgpContext(load_algebra(args.algebra), _poly(args))
    x = ctx.parse(args.element)
    if x.terms:
        raise UsageError("reduce-dr takes central terms only, e.g. 'k@-1' or '(xi^2)*k@0'")
    try:
        red = reduce_mod_dR(x.central, args.require_window)
    except PrecisionError as e:
        print(f"precision-limited: {e}", file=sys.stderr)
        return 1
    lines = ["zero obstruction (member of dR)" if red.is_zero else "nonzero obstruction"]
    for s, vals in sorted(red.obstructions.items()):
        lines.append(f"  weight {s}: " + ", ".join(str(v) for v in vals))
    if red.window is not None:
        lines.append(f"  certified below weight {red.window}")
    _emit(args, red.to_json(), "\n".join(lines))
    return 0


def _module_from_context(args):
    if getattr(args, "context", None):
        data = json.loads(Path(args.context).read_text())
        for k in ("algebra", "beta", "p", "level", "f"):
            if data.get(k) is not None:
                setattr(args, k, data[k])
        return _module(args, data["module"])
    return _module(args, args.module)


def cmd_vacuum(args):
    if args.action == "build":
        M = _module(args, args.module)
        basis = M.pbw_basis(args.depth, args.depth)
        payload = {
            "module": M.kind,
            "level": str(M.level),
            "generators": [M.key_name((-1, s, i)) for (s, i) in M.creation_key_types()],
            "pbw_monomials_at_depth": len(basis),
            "depth": args.depth,
        }
        if M.kind in ("Vcheck", "Mhat"):
            payload["p"] = str(M.algebra.p)
        if M.f is not None:
            payload["f"] = str(M.f)
        if args.save:
            Path(args.save).write_text(
                json.dumps(
                    {"module": args.module, "algebra": args.algebra, "beta": args.beta, "p": args.p, "level": args.level, "f": args.f},
                    indent=2,
                    sort_keys=True,
                )
            )
        text = "\n".join(f"{k}: {v}" for k, v in payload.items())
        _emit(args, payload, text)
        return 0
    M = _module_from_context(args)
    v = M.parse_vector(args.to)
    ops = [o for o in args.op.split() if o]
    for op in reversed(ops):
        if op == "D":
            v = M.apply_D(v)
        else:
            v = M.apply_element(M.algebra.parse(op), v)
    _emit(args, {"vector": v.to_json()}, str(v))
    return 0


def _operand(M, text):
    """``e^1`` (a generating series), ``1`` (identity) or ``[series]`` (a multiplier)."""
    text = text.strip()
    if text == "1":
        return Identity(M)
    if text.startswith("[") and text.endswith("]"):
        return Multiplier(M, parse_series(text[1:-1]))
    x = M.algebra.parse(text if "@" in text else text + "@0")
    if len(x.terms) != 1:
        raise UsageError(f"operand {text!r} must be a single generator")
    (key, _), = x.terms.items()
    return Field(M, key[1], key[2])


def _mode_window(args, S, v):
    hi = args.xmax if args.xmax is not None else S.bound(v) - 1
    lo = args.xmin if args.xmin is not None else hi - 7
    return lo, hi


def cmd_locality(args):
    M = _module(args, args.module)
    A, B = _operand(M, args.a), _operand(M, args.b)
    probes = [M.vacuum()] + [M.monomial([(-1, s, i)]) for (s, i) in M.creation_key_types()]
    window = (args.xmin if args.xmin is not None else -3, args.xmax if args.xmax is not None else 3)
    k, wit = locality_order(A, B, probes, args.k_max, window)
    payload = {"a": args.a, "b": args.b, "order": k, "window": list(window), "probes": len(probes), "tightness_witness": wit}
    _emit(args, payload, f"locality order of ({args.a}, {args.b}) on {M.kind}: {k if k is not None else 'none <= ' + str(args.k_max)}")
    return 0 if k is not None else 1


def cmd_nth_product(args):
    M = _module(args, args.module)
    S = NthProduct(_operand(M, args.a), _operand(M, args.b), args.n)
    v = M.parse_vector(args.to) if args.to else M.vacuum()
    lo, hi = _mode_window(args, S, v)
    rows = {m: S.mode(m, v) for m in range(lo, hi + 1)}
    payload = {
        "a": args.a,
        "b": args.b,
        "n": args.n,
        "vector": str(v),
        "window": [lo, hi],
        "certificate": S.bound(v),
        "modes": {str(m): w.to_json() for m, w in rows.items()},
    }
    lines = [f"({args.a})_{args.n}({args.b}) on {v}; modes {lo}..{hi}, zero from mode {S.bound(v)} on"]
    lines += [f"  mode {m:>3}: {w}" for m, w in rows.items()]
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_y_apply(args):
    kind = MODULE_KINDS.get(args.module.lower())
    if kind not in ("Vcheck", "Mhat"):
        raise UsageError("y-apply works on vcheck (vertex operators) or mhat (type-zero module)")
    V = _module(args, "vcheck")
    if kind == "Vcheck":
        Ymap, W = vertex_operator_map(V), V
    else:
        W = _module(args, "mhat")
        Ymap = type_zero_map(V, W)
    state = V.parse_vector(args.state)
    w = W.parse_vector(args.to)
    S = Ymap.Y(state)
    lo, hi = _mode_window(args, S, w)
    rows = {}
    for m in range(lo, hi + 1):
        r = S.mode(m, w)
        if r:
            rows[-m - 1] = r
    payload = {
        "state": str(state),
        "vector": str(w),
        "window_modes": [lo, hi],
        "certificate": S.bound(w),
        "terms": {str(e): r.to_json() for e, r in sorted(rows.items())},
    }
    lines = [f"Y({state}, x) {w}  (x-exponents {-hi - 1}..{-lo - 1}; no terms below x^{-S.bound(w)})"]
    lines += [f"  x^{e}: {r}" for e, r in sorted(rows.items())]
    _emit(args, payload, "\n".join(lines))
    return 0


def _suite_config(args, suite) -> SuiteConfig:
    return SuiteConfig(
        suite=suite,
        algebra=args.algebra,
        beta=args.beta,
        p=args.p,
        level=str(args.level),
        f=args.f,
        trunc=_trunc(args),
        depth=args.depth,
        trials=args.trials,
        seed=args.seed,
    )


def format_report(rep: dict) -> str:
    lines = [f"{rep['suite']}: {rep['status']}"]
    for c in rep["checks"]:
        count = f"{c['passed']} passed, {c['failed']} failed"
        if c["precision_limited"]:
            count += f", {c['precision_limited']} precision-limited"
        lines.append(f"  [{c['status']}] {c['name']}: {count}")
        if "window" in c:
            lines.append(f"      window {json.dumps(c['window'], sort_keys=True)}")
        for k in ("obstruction", "nonzero_instances"):
            if k in c.get("info", {}):
                lines.append(f"      {k}: {c['info'][k]}")
        for w in c.get("witnesses", []):
            lines.append(f"      witness {json.dumps(w, sort_keys=True)}")
    if "wall_time" in rep:
        lines.append(f"  wall time {rep['wall_time']}s")
    return "\n".join(lines)


def cmd_verify(args):
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    if any(n not in SUITES for n in names):
        raise UsageError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)} or 'all'")
    reports = [run_suite(_suite_config(args, n), timing=not args.no_timing) for n in names]
    if args.json:
        payload = reports[0] if len(reports) == 1 else {"reports": reports}
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(format_report(r) for r in reports))
    return 0 if all(r["status"] == "pass" for r in reports) else 1


# -- table dumps ----------------------------------------------------------------------------


def dump_bracket_table(args):
    ctx = _family_ctx(args, args.family)
    if args.family not in ("hat", "check"):
        raise UsageError("bracket-table is available for the hat and check families")
    lo, hi = args.modes
    base = ctx.base
    rows = []
    for sx in (PLAIN, COPY):
        for sy in (PLAIN, COPY):
            for i in range(base.dim):
                for j in range(base.dim):
                    for m in range(lo, hi + 1):
                        for n in range(lo, hi + 1):
                            b = ctx.bracket(ctx.gen(sx, i, m), ctx.gen(sy, j, n))
                            rows.append((ctx.key_name((m, sx, i)), ctx.key_name((n, sy, j)), b))
    if args.json:
        return [{"x": x, "y": y, "bracket": ctx.element_json(b)} for x, y, b in rows]
    return "\n".join(f"[{x}, {y}] = {ctx.format_element(b)}" for x, y, b in rows)


def dump_pbw_basis(args):
    M = _module(args, args.module)
    basis = M.pbw_basis(args.depth, args.depth)
    names = [M.format_mono(m) for m in basis]
    return names if args.json else "\n".join(names)


def dump_locality_matrix(args):
    kind = MODULE_KINDS.get(args.module.lower())
    if kind not in ("Vcheck", "Mhat"):
        raise UsageError("locality-matrix is available for vcheck and mhat")
    cfg = _suite_config(args, "locality")
    chk = _locality_checks(cfg, kind)
    matrix = chk.info["matrix"]
    if args.json:
        return {"module": kind, "window": chk.window, "orders": matrix}
    names = []
    for pair in matrix:
        a, _ = pair.split("|")
        if a not in names:
            names.append(a)
    width = max(len(n) for n in names) + 2
    lines = [" " * width + "".join(n.rjust(width) for n in names)]
    for a in names:
        lines.append(a.ljust(width) + "".join(str(matrix[f"{a}|{b}"]).rjust(width) for b in names))
    return "\n".join(lines)


DUMPS = {"bracket-table": dump_bracket_table, "pbw-basis": dump_pbw_basis, "locality-matrix": dump_locality_matrix}


def cmd_dump(args):
    if args.table not in DUMPS:
        raise UsageError(f"unknown table {args.table!r}; choose from {sorted(DUMPS)}")
    out = DUMPS[args.table](args)
    print(json.dumps(out, indent=2, sort_keys=True) if args.json else out)
    return 0


# -- parser -----------------------------------------------------------------------------------


def _mode_range(text):
    try:
        lo, hi = (int(t) for t in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError("expected LO..HI, e.g. -2..2") from None
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="vertexforge", description="Current algebras, vacuum modules and vertex operators.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-lie", parents=[common], help="validate a Lie algebra definition")
    p.set_defaults(func=cmd_check_lie)

    p = sub.add_parser("bracket", parents=[common], help="bracket of two generator descriptors")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--family", choices=FAMILIES, default="hat")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("reduce-dr", parents=[common], help="reduce a central K(g,p) element modulo dR")
    p.add_argument("element", help="e.g. 'k@-1' or '(xi^2+xi)*k@0'")
    p.add_argument("--require-window", type=int, default=None)
    p.set_defaults(func=cmd_reduce_dr)

    p = sub.add_parser("vacuum", parents=[common], help="build a module or apply operators in it")
    p.add_argument("action", choices=("build", "apply"))
    p.add_argument("--module", default="vcheck", help="vcheck, mhat, vkl, vf or fock")
    p.add_argument("--save", default=None, help="(build) write the module configuration to a file")
    p.add_argument("--context", default=None, help="(apply) read a configuration written by build --save")
    p.add_argument("--op", default="", help="(apply) operators, rightmost first, e.g. 'e^1@1' or 'D'")
    p.add_argument("--to", default="1", help="(apply) vector, e.g. 'f^1@-1*1'")
    p.set_defaults(func=cmd_vacuum)

    for name, func, helptext in (
        ("locality", cmd_locality, "locality order of two generating series"),
        ("nth-product", cmd_nth_product, "modes of an n-th product applied to a vector"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--module", default="mhat")
        p.add_argument("--a", required=True, help="generator name, '1' or '[series]'")
        p.add_argument("--b", required=True)
        p.add_argument("--xmin", type=int, default=None)
        p.add_argument("--xmax", type=int, default=None)
        if name == "locality":
            p.add_argument("--k-max", type=int, default=6)
        else:
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--to", default=None, help="vector (default: the cyclic vector)")
        p.set_defaults(func=func)

    p = sub.add_parser("y-apply", parents=[common], help="apply Y(state, x) to a vector")
    p.add_argument("--module", default="vcheck", help="vcheck or mhat")
    p.add_argument("--state", required=True, help="state in Vcheck, e.g. 'e@-1*1'")
    p.add_argument("--to", default="1")
    p.add_argument("--xmin", type=int, default=None)
    p.add_argument("--xmax", type=int, default=None)
    p.set_defaults(func=cmd_y_apply)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", help=f"one of {', '.join(sorted(SUITES))}, or 'all'")
    p.add_argument("--no-timing", action="store_true", help="omit wall time (byte-stable output)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dump", parents=[common], help="print a reference table")
    p.add_argument("table", help="bracket-table, pbw-basis or locality-matrix")
    p.add_argument("--family", choices=("hat", "check"), default="hat")
    p.add_argument("--module", default="vcheck")
    p.add_argument("--modes", type=_mode_range, default=(-2, 2), help="mode range LO..HI")
    p.set_defaults(func=cmd_dump)
    return parser


def _join_ranges(argv):
    # argparse reads "-2..2" as an option; glue it to --modes
    out = []
    it = iter(argv)
    for a in it:
        if a == "--modes":
            out.append("--modes=" + next(it, ""))
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_ranges(sys.argv[1:] if argv is None else list(argv)))
    try:
        code = args.func(args)
        sys.stdout.flush()
        return code
    except (UsageError, ValueError, KeyError, json.JSONDecodeError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the exit-time flush
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
