# orthogonality/discrete/__init__.py
"""Bilateral lattice orthogonality"""

from orthogonality.discrete.core import (
    DiscreteOrthoSpec, GramReport, LatticeEvaluator, admissible_degree, closed_norm, discrete_inner, gram,
    tail_ratio_check, total_mass,
)

__all__ = [
    "DiscreteOrthoSpec", "GramReport", "LatticeEvaluator", "admissible_degree", "closed_norm",
    "discrete_inner", "gram", "tail_ratio_check", "total_mass",
]
