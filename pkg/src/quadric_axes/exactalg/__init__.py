"""Exact arithmetic over Q and Q(sqrt d) and the constructibility tests."""

from .constructibility import (
    PLANAR,
    REDUCIBLE_PLANAR,
    SOLID,
    ConstructibilityReport,
    QFRootReport,
    ResolventSystem,
    factor_pair_constructibility,
    edge_quartic_constructibility,
    qf_root_search,
    quadratic_factors,
    quartic_constructibility,
    resolvent_system,
    resultant_in_lam,
    split_over_field,
    standard_resolvent,
)
from .poly import BiPoly, Poly, poly_from_ints
from .quadfield import QuadFieldElem, Rat, rat, rational_sqrt, squarefree_decomposition
from .rationalroots import RationalRootReport, divisors, isolate_real_roots, rational_root_test

__all__ = [
    "PLANAR", "REDUCIBLE_PLANAR", "SOLID",
    "BiPoly", "ConstructibilityReport", "Poly", "QFRootReport", "QuadFieldElem", "Rat",
    "RationalRootReport", "ResolventSystem",
    "divisors", "factor_pair_constructibility", "isolate_real_roots", "edge_quartic_constructibility",
    "poly_from_ints", "qf_root_search", "quadratic_factors", "quartic_constructibility", "rat",
    "rational_root_test", "rational_sqrt", "resolvent_system", "resultant_in_lam",
    "split_over_field", "squarefree_decomposition", "standard_resolvent",
]
