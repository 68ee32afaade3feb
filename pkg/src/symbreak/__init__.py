"""Symmetry breaking with lexicographic and Gray-code leader constraints."""

from .engine import (
    BudgetExceeded,
    GuardExceeded,
    HeuristicSpec,
    Model,
    ModelError,
    SearchResult,
    solve_all,
    solve_optimize,
)
from .ordering import OrderingKind, compare, gray_rank, gray_unrank, ordering_leq_propagator
from .symmetry import Symmetry, SymmetryGroup, apply, compose, linearize, post_leader_constraints

__all__ = [
    "BudgetExceeded",
    "GuardExceeded",
    "HeuristicSpec",
    "Model",
    "ModelError",
    "OrderingKind",
    "SearchResult",
    "Symmetry",
    "SymmetryGroup",
    "apply",
    "compare",
    "compose",
    "gray_rank",
    "gray_unrank",
    "linearize",
    "ordering_leq_propagator",
    "post_leader_constraints",
    "solve_all",
    "solve_optimize",
]
