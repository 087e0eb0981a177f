"""Finite-dimensional Lie algebras given by structure constants and a form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .scalars import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "LieAlgebraSpec",
    "LieElement",
    "ValidationReport",
    "sl2",
    "abelian",
    "builtin",
    "load_algebra",
    "matrix_inverse",
]


def _sparse(vec) -> dict:
    return {i: as_scalar(c) for i, c in enumerate(vec) if as_scalar(c)}


class LieAlgebraSpec:
    """Structure constants ``[e_i, e_j] = sum_k c_ij^k e_k`` plus a bilinear form.

    The bracket table is stored sparsely: ``table[(i, j)]`` is a dict
    ``k -> c_ij^k`` with only nonzero entries.  Missing pairs bracket to zero.
    """

    def __init__(self, basis_names, structure, form, name=None):
        self.basis_names = tuple(basis_names)
        self.dim = len(self.basis_names)
        self.name = name or "custom"
        n = self.dim
        if len(set(self.basis_names)) != n:
            raise ValueError("basis names must be distinct")
        table = {}
        for (i, j), vec in structure.items():
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"bracket index ({i},{j}) out of range")
            if isinstance(vec, dict):
                sp = {int(k): as_scalar(c) for k, c in vec.items() if as_scalar(c)}
            else:
                if len(vec) != n:
                    raise ValueError(f"bracket ({i},{j}) has {len(vec)} coefficients, expected {n}")
                sp = _sparse(vec)
            if sp:
                table[(i, j)] = sp
        self.table = table
        form = [[as_scalar(x) for x in row] for row in form]
        if len(form) != n or any(len(row) != n for row in form):
            raise ValueError("form must be a dim x dim matrix")
        self.form = tuple(tuple(row) for row in form)
        self.index = {name: i for i, name in enumerate(self.basis_names)}

    # -- basis level --------------------------------------------------------
    def bracket_basis(self, i: int, j: int) -> dict:
        return self.table.get((i, j), {})

    def form_basis(self, i: int, j: int) -> Scalar:
        return self.form[i][j]

    def bracket_sparse(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.table.get((i, j), {}).items():
                    out[k] = out.get(k, ZERO) + a * b * c
        return {k: v for k, v in out.items() if v}

    def form_sparse(self, x: dict, y: dict) -> Scalar:
        acc = ZERO
        for i, a in x.items():
            row = self.form[i]
            for j, b in y.items():
                if row[j]:
                    acc = acc + a * b * row[j]
        return acc

    # -- element level ------------------------------------------------------
    def element(self, coeffs) -> "LieElement":
        return LieElement(self, coeffs)

    def basis(self, name_or_index) -> "LieElement":
        i = self.index[name_or_index] if isinstance(name_or_index, str) else int(name_or_index)
        return LieElement(self, {i: ONE})

    def zero(self) -> "LieElement":
        return LieElement(self, {})

    def bracket(self, a: "LieElement", b: "LieElement") -> "LieElement":
        self._check(a, b)
        return LieElement(self, self.bracket_sparse(a.sparse, b.sparse))

    def form_eval(self, a: "LieElement", b: "LieElement") -> Scalar:
        self._check(a, b)
        return self.form_sparse(a.sparse, b.sparse)

    def _check(self, a, b):
        if a.algebra.dim != self.dim or b.algebra.dim != self.dim:
            raise ValueError(
                f"dimension mismatch: {a.algebra.dim}, {b.algebra.dim} vs algebra of dim {self.dim}"
            )

    def validate(self) -> "ValidationReport":
        return validate(self)

    def to_json(self) -> dict:
        n = self.dim
        brackets = []
        for (i, j), sp in sorted(self.table.items()):
            brackets.append([i, j, [str(sp.get(k, ZERO)) for k in range(n)]])
        return {
            "basis": list(self.basis_names),
            "brackets": brackets,
            "form": [[str(x) for x in row] for row in self.form],
        }

    def __repr__(self):
        return f"LieAlgebraSpec({self.name}, dim={self.dim})"


class LieElement:
    """A vector in g, held as a dense coefficient tuple over the basis."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: LieAlgebraSpec, coeffs):
        self.algebra = algebra
        if isinstance(coeffs, dict):
            dense = [ZERO] * algebra.dim
            for i, c in coeffs.items():
                dense[int(i)] = as_scalar(c)
        else:
            dense = [as_scalar(c) for c in coeffs]
            if len(dense) != algebra.dim:
                raise ValueError(f"expected {algebra.dim} coefficients, got {len(dense)}")
        self.coeffs = tuple(dense)

    @property
    def sparse(self) -> dict:
        return {i: c for i, c in enumerate(self.coeffs) if c}

    def __add__(self, other):
        return LieElement(self.algebra, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return LieElement(self.algebra, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return LieElement(self.algebra, [-a for a in self.coeffs])

    def __rmul__(self, s):
        s = as_scalar(s)
        return LieElement(self.algebra, [s * a for a in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, LieElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            name = self.algebra.basis_names[i]
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append("-" + name)
            else:
                parts.append(f"{c}*{name}" if c.is_real else f"({c})*{name}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    __repr__ = __str__


# -- validation -------------------------------------------------------------------


@dataclass
class ValidationReport:
    algebra: str
    entries: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e["status"] == "pass" for e in self.entries)

    def status(self, axiom: str) -> str:
        for e in self.entries:
            if e["axiom"] == axiom:
                return e["status"]
        raise KeyError(axiom)

    def to_json(self) -> dict:
        return {"algebra": self.algebra, "ok": self.ok, "checks": self.entries}


def matrix_inverse(m):
    """Exact Gauss-Jordan inverse; returns None for a singular matrix."""
    n = len(m)
    a = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def validate(spec: LieAlgebraSpec) -> ValidationReport:
    """Check antisymmetry, Jacobi, form symmetry, invariance and non-degeneracy."""
    n = spec.dim
    names = spec.basis_names
    rep = ValidationReport(spec.name)
    e = [{i: ONE} for i in range(n)]

    def entry(axiom, witness):
        item = {"axiom": axiom, "status": "pass" if witness is None else "fail"}
        if witness is not None:
            item["witness"] = witness
        rep.entries.append(item)

    witness = None
    for i in range(n):
        for j in range(i, n):
            s = dict(spec.bracket_basis(i, j))
            for k, c in spec.bracket_basis(j, i).items():
                s[k] = s.get(k, ZERO) + c
            if any(s.values()):
                witness = {"pair": [names[i], names[j]]}
                break
        if witness:
            break
    entry("antisymmetry", witness)

    witness = None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                t1 = spec.bracket_sparse(e[i], spec.bracket_sparse(e[j], e[k]))
                t2 = spec.bracket_sparse(e[j], spec.bracket_sparse(e[k], e[i]))
                t3 = spec.bracket_sparse(e[k], spec.bracket_sparse(e[i], e[j]))
                tot = {}
                for t in (t1, t2, t3):
                    for idx, c in t.items():
                        tot[idx] = tot.get(idx, ZERO) + c
                if any(tot.values()):
                    witness = {"triple": [names[i], names[j], names[k]]}
                    break
            if witness:
                break
        if witness:
            break
    entry("jacobi", witness)

    witness = None
    for i in range(n):
        for j in range(n):
            if spec.form[i][j] != spec.form[j][i]:
                witness = {"pair": [names[i], names[j]]}
                break
        if witness:
            break
    entry("form-symmetry", witness)

    witness = None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = spec.form_sparse(spec.bracket_sparse(e[i], e[j]), e[k])
                rhs = spec.form_sparse(e[i], spec.bracket_sparse(e[j], e[k]))
                if lhs != rhs:
                    witness = {
                        "triple": [names[i], names[j], names[k]],
                        "lhs": str(lhs),
                        "rhs": str(rhs),
                    }
                    break
            if witness:
                break
        if witness:
            break
    entry("invariance", witness)

    inv = matrix_inverse(spec.form)
    entry("non-degeneracy", None if inv is not None else {"form": "singular"})
    return rep


# -- built-ins and loading -------------------------------------------------------------


def sl2() -> LieAlgebraSpec:
    """Basis e, h, f with [h,e]=2e, [h,f]=-2f, [e,f]=h; trace form."""
    e, h, f = 0, 1, 2
    s = {
        (h, e): {e: 2},
        (e, h): {e: -2},
        (h, f): {f: -2},
        (f, h): {f: 2},
        (e, f): {h: 1},
        (f, e): {h: -1},
    }
    form = [[0, 0, 1], [0, 2, 0], [1, 0, 0]]
    return LieAlgebraSpec(("e", "h", "f"), s, form, name="sl2")


def abelian() -> LieAlgebraSpec:
    """One-dimensional abelian algebra with <a,a> = 1."""
    return LieAlgebraSpec(("a",), {}, [[1]], name="abelian")


_BUILTINS = {"sl2": sl2, "abelian": abelian}


def builtin(name: str) -> LieAlgebraSpec:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise ValueError(f"unknown built-in algebra {name!r}; choose from {sorted(_BUILTINS)}") from None


def load_algebra(source: str) -> LieAlgebraSpec:
    """Load a built-in by name or a JSON spec file.

    The file format is ``{"basis": [...], "brackets": [[i, j, [coeffs]], ...],
    "form": [[...], ...]}``.  A bracket listed only as (i, j) gets its
    (j, i) partner filled in by antisymmetry; if both are listed they are
    kept verbatim so the validator can catch inconsistencies.
    """
    if source in _BUILTINS:
        return builtin(source)
    path = Path(source)
    if not path.exists():
        raise ValueError(f"no built-in algebra or file named {source!r}")
    data = json.loads(path.read_text())
    basis = data["basis"]
    structure = {}
    for i, j, vec in data.get("brackets", []):
        structure[(int(i), int(j))] = [as_scalar(str(c)) for c in vec]
    for (i, j), vec in list(structure.items()):
        if (j, i) not in structure:
            structure[(j, i)] = [-c for c in vec]
    form = [[as_scalar(str(x)) for x in row] for row in data["form"]]
    return LieAlgebraSpec(basis, structure, form, name=path.stem)
