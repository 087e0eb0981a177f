"""Exact computation with polynomial current algebras and their vertex operators.

The layers build on one another: exact scalars and truncated Laurent series,
finite-dimensional Lie algebras with an invariant form, the current algebras
and their mode brackets, PBW-normal-ordered modules, operator series with
n-th products, and seeded verification suites.
"""

from .currents import (
    COPY,
    PLAIN,
    AffineContext,
    CurrentElement,
    HfContext,
    KgpContext,
    KlContext,
    elliptic_p,
    reduce_mod_dR,
)
from .lie import LieAlgebraSpec, load_algebra, sl2
from .modules import ModuleContext, PBWVector, build_module
from .scalars import Scalar, as_scalar, parse_scalar
from .series import LaurentSeries, PrecisionError, default_trunc, parse_series
from .suites import SUITES, SuiteConfig, run_suite
from .vertex import (
    Field,
    Identity,
    Multiplier,
    NthProduct,
    YMap,
    borcherds_defect,
    heisenberg_map,
    locality_order,
    nth_product,
    type_zero_map,
    vertex_operator_map,
)

__version__ = "0.1.0"

__all__ = [
    "COPY",
    "PLAIN",
    "AffineContext",
    "CurrentElement",
    "HfContext",
    "KgpContext",
    "KlContext",
    "elliptic_p",
    "reduce_mod_dR",
    "LieAlgebraSpec",
    "load_algebra",
    "sl2",
    "ModuleContext",
    "PBWVector",
    "build_module",
    "Scalar",
    "as_scalar",
    "parse_scalar",
    "LaurentSeries",
    "PrecisionError",
    "default_trunc",
    "parse_series",
    "SUITES",
    "SuiteConfig",
    "run_suite",
    "Field",
    "Identity",
    "Multiplier",
    "NthProduct",
    "YMap",
    "borcherds_defect",
    "heisenberg_map",
    "locality_order",
    "nth_product",
    "type_zero_map",
    "vertex_operator_map",
]
