"""Ends, walls and l2-Betti splitting criteria for Coxeter groups."""

__version__ = "0.1.0"

from .coxeter import (
    INF,
    CoxeterInputError,
    CoxeterSystem,
    Element,
    ResourceLimitError,
    conjugate_reflection,
    inverse,
    is_in_centralizer,
    multiply,
    parse_system,
    reduce,
    render_system,
)
from .cayley import build_ball, build_coset_ball, centralizer_oracle
from .ends import Verdict, estimate_ends, estimate_relative_ends
from .walls import Halfspace, crossing_obstruction, halfspace_membership, wall_certificate, wall_edges
from .l2 import TriangleParams, coxeter_betti_lower_bound, splitting_criterion
from .checker import analyze_reflection, verify_paper_examples

__all__ = [
    "INF", "CoxeterInputError", "CoxeterSystem", "Element", "ResourceLimitError",
    "conjugate_reflection", "inverse", "is_in_centralizer", "multiply", "parse_system",
    "reduce", "render_system", "build_ball", "build_coset_ball", "centralizer_oracle",
    "Verdict", "estimate_ends", "estimate_relative_ends", "Halfspace", "crossing_obstruction",
    "halfspace_membership", "wall_certificate", "wall_edges", "TriangleParams",
    "coxeter_betti_lower_bound", "splitting_criterion", "analyze_reflection", "verify_paper_examples",
]
