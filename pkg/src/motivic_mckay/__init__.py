"""Exact checks of the motivic McKay correspondence for finite linear groups."""
from .cyclotomic import CycNum, kernel_dimension, primitive_root
from .groups import Group, GroupSpec, catalog_spec, conjugacy_classes, eigen_exponents, generate_group, weight
from .mckay import INDETERMINATE, classify_arc_cyclic, fiber_sum, orbifold_sum
from .motivic import L, MotivicExpr, euler_realize, expr_eq, hodge_realize, norm, point_count_realize
from .resolution import ResolutionData, ade_catalog, check_mckay_identity, crepant_fiber_class, gorenstein_measure

__version__ = "0.1.0"

__all__ = [
    "CycNum",
    "kernel_dimension",
    "primitive_root",
    "Group",
    "GroupSpec",
    "catalog_spec",
    "conjugacy_classes",
    "eigen_exponents",
    "generate_group",
    "weight",
    "INDETERMINATE",
    "classify_arc_cyclic",
    "fiber_sum",
    "orbifold_sum",
    "L",
    "MotivicExpr",
    "euler_realize",
    "expr_eq",
    "hodge_realize",
    "norm",
    "point_count_realize",
    "ResolutionData",
    "ade_catalog",
    "check_mckay_identity",
    "crepant_fiber_class",
    "gorenstein_measure",
]
