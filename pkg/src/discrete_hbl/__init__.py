"""Exact constants of multilinear (HBL-type) inequalities on abelian groups."""

from .constants import (
    ConstantReport,
    HblDatum,
    exponent_vector,
    factorization_check,
    global_constant,
    local_constant,
    optimal_constant,
    quotient_datum,
    restrict_datum,
    torsion_split,
)
from .factored import FactoredValue
from .groups import AbelianGroup, GroupElement, Homomorphism, Subgroup, kernel, quotient_group
from .subgroups import enumerate_subgroups

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "ConstantReport",
    "FactoredValue",
    "GroupElement",
    "HblDatum",
    "Homomorphism",
    "Subgroup",
    "enumerate_subgroups",
    "exponent_vector",
    "factorization_check",
    "global_constant",
    "kernel",
    "local_constant",
    "optimal_constant",
    "quotient_datum",
    "quotient_group",
    "restrict_datum",
    "torsion_split",
]
