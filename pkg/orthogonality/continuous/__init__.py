# orthogonality/continuous/__init__.py
"""Real-line orthogonality, the J integral and the beta integrals"""

from orthogonality.continuous.core import (
    WeightSpec, beta_integral_check, continuous_inner, continuous_norm, discrete_to_continuous_check,
    gaussian_constant, j_integral, j_integral_triangulation, psi_closed, psi_sum, qbeta_integral,
    ramanujan_fourier_pair, sin4_integral, t_constant, t_constant_sequence,
)

__all__ = [
    "WeightSpec", "beta_integral_check", "continuous_inner", "continuous_norm", "discrete_to_continuous_check",
    "gaussian_constant", "j_integral", "j_integral_triangulation", "psi_closed", "psi_sum", "qbeta_integral",
    "ramanujan_fourier_pair", "sin4_integral", "t_constant", "t_constant_sequence",
]
