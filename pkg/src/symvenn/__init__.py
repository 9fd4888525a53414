"""Crosscut-symmetric simple Venn diagrams: build, validate, search, draw."""

from .core import (
    AlphaError,
    ClusterForm,
    DiagramOrder,
    OrderError,
    build_sigma,
    foata_normal_form,
    k_point_table,
    polar_crosscut_possible,
    sequence_lengths,
)
from .search import SearchConfig, search, split_work
from .validate import (
    check_crosscut_symmetry,
    check_polar_symmetry,
    curve_crossing_lists,
    find_crosscuts,
    validate_full,
    validate_symmetric,
)

__all__ = [
    "AlphaError",
    "ClusterForm",
    "DiagramOrder",
    "OrderError",
    "SearchConfig",
    "build_sigma",
    "check_crosscut_symmetry",
    "check_polar_symmetry",
    "curve_crossing_lists",
    "find_crosscuts",
    "foata_normal_form",
    "k_point_table",
    "polar_crosscut_possible",
    "search",
    "sequence_lengths",
    "split_work",
    "validate_full",
    "validate_symmetric",
]
