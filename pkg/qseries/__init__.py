# qseries/__init__.py
"""q-arithmetic and basic hypergeometric series"""

from qseries.core import (
    INFINITY, LogComplex, ParamMultiset, QContext, SeriesResult, gamma_recip, qgamma,
    qpoch_bilateral_index, qpoch_finite, qpoch_finite_negbase, qpoch_infinite, qpoch_multiset, theta,
)
from qseries.hyper import BilateralTermGen, PhiSpec, bilateral_sum, dougall_5h5, phi_rs

__all__ = [
    "INFINITY", "BilateralTermGen", "LogComplex", "ParamMultiset", "PhiSpec", "QContext",
    "SeriesResult", "bilateral_sum", "dougall_5h5", "gamma_recip", "phi_rs", "qgamma",
    "qpoch_bilateral_index", "qpoch_finite", "qpoch_finite_negbase", "qpoch_infinite",
    "qpoch_multiset", "theta",
]
