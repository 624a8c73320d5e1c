# orthogonality/continuous/quadrature.py
"""
Quadrature engines for the continuous relations:
- equal-step trapezoid on a truncated real line for Gaussian-type integrands
- equispaced rule on [0, 1) for unit-periodic integrands
- Fourier-weighted half-line rule for algebraically decaying oscillatory integrands
"""

import itertools
import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from common.config import get_config
from common.errors import ConfigError, ConvergenceError
from common.logger import get_module_logger
from qseries.core import SMALLEST_NORMAL, NeumaierSum, SeriesResult

logger = get_module_logger("quadrature")

Integrand = Callable[[float], complex]

# Hard cap on the half-width grown by envelope sampling
MAX_HALF_WIDTH = 400.0


@dataclass(frozen=True)
class QuadratureSpec:
    """Truncation window and step schedule for the real-line trapezoid"""
    half_width: float
    step: float = 0.25
    center: float = 0.0
    refine_limit: int = 6
    gate_tol: float = 1e-12
    envelope_tol: float = 1e-16

    def __post_init__(self):
        if not self.half_width > 0 or not self.step > 0:
            raise ConfigError("half_width and step must be positive",
                              {"half_width": self.half_width, "step": self.step})
        if self.refine_limit < 1:
            raise ConfigError("refine_limit must be at least 1", {"refine_limit": self.refine_limit})

    @classmethod
    def from_config(cls, half_width: float, center: float = 0.0, **overrides) -> 'QuadratureSpec':
        quad = get_config().quadrature
        settings = dict(step=quad.initial_step, refine_limit=quad.refine_limit, gate_tol=quad.gate_tol)
        settings.update(overrides)
        return cls(half_width=half_width, center=center, **settings)

    @classmethod
    def gaussian(cls, q: float, center: float, eps_term: float, **overrides) -> 'QuadratureSpec':
        """Window where q^{2(x-center)^2} falls below eps_term, plus the configured safety units"""
        safety = get_config().quadrature.safety_units
        log_q_inv = -math.log(q)
        half_width = math.sqrt(math.log(1 / eps_term) / (2 * log_q_inv)) + safety
        return cls.from_config(half_width, center, envelope_tol=eps_term, **overrides)

    def widened(self, extra: float) -> 'QuadratureSpec':
        return replace(self, half_width=self.half_width + extra)


def fit_envelope(f: Integrand, spec: QuadratureSpec, sample_step: float = 0.5) -> QuadratureSpec:
    """Grow the half-width one unit at a time until both ends fall below envelope_tol * peak"""
    c = spec.center
    while True:
        L = spec.half_width
        samples = np.arange(c - L, c + L + sample_step / 2, sample_step)
        peak = max(abs(f(float(x))) for x in samples)
        ends = max(abs(f(c - L)), abs(f(c + L)))
        if ends <= spec.envelope_tol * max(peak, SMALLEST_NORMAL):
            return spec
        if L >= MAX_HALF_WIDTH:
            raise ConvergenceError(
                "Integrand envelope does not decay within the maximal window",
                {"half_width": L, "end_ratio": ends / max(peak, SMALLEST_NORMAL)},
            )
        spec = spec.widened(1.0)


def _sum(values: Iterable[complex]) -> Tuple[complex, float]:
    acc = NeumaierSum()
    scale = 0.0
    for v in values:
        acc.add(v)
        scale += abs(v)
    return acc.value, scale


def integrate_real_line(f: Integrand, spec: QuadratureSpec) -> SeriesResult:
    """Equal-step trapezoid on [center - L, center + L] with step halving

    Nodes are visited in a fixed order, so the result does not depend on how
    they are evaluated.
    """
    c, L, h = spec.center, spec.half_width, spec.step
    j_max = int(math.ceil(L / h))
    nodes = [c + j * h for j in range(-j_max, j_max + 1)]
    values = [f(x) for x in nodes]
    total, abs_total = _sum(values)
    estimate = h * total
    scale = h * abs_total
    n_nodes = len(nodes)

    ends = max(abs(values[0]), abs(values[-1]))
    peak = max(abs(v) for v in values)
    envelope_ok = True
    if ends > spec.envelope_tol * max(peak, SMALLEST_NORMAL):
        envelope_ok = False
        logger.warning(f"Envelope not decayed at +/-{L} (end magnitude {ends:.3e})")

    converged = False
    difference = math.inf
    for level in range(1, spec.refine_limit + 1):
        h /= 2
        mids = [c + (2 * j + 1) * h for j in range(-j_max * 2 ** (level - 1), j_max * 2 ** (level - 1))]
        mid_total, mid_abs = _sum(f(x) for x in mids)
        refined = estimate / 2 + h * mid_total
        scale = scale / 2 + h * mid_abs
        n_nodes += len(mids)
        difference = abs(refined - estimate)
        estimate = refined
        logger.debug(f"trapezoid level {level}: h={h:.4g}, change {difference:.3e}")
        if difference <= spec.gate_tol * max(scale, abs(estimate), SMALLEST_NORMAL):
            converged = True
            break

    converged = converged and envelope_ok
    return SeriesResult(
        estimate, n_nodes, difference, converged,
        {"step": h, "half_width": L, "scale": scale, "envelope_ok": envelope_ok, "peak": peak},
    )


def integrate_unit_periodic(F: Integrand, initial_nodes: int = 8, refine_limit: Optional[int] = None,
                            gate_tol: Optional[float] = None) -> SeriesResult:
    """Equispaced rule for a 1-periodic analytic F on [0, 1), doubling the node count"""
    quad = get_config().quadrature
    refine_limit = refine_limit if refine_limit is not None else quad.refine_limit
    gate_tol = gate_tol if gate_tol is not None else quad.gate_tol

    M = initial_nodes
    total, abs_total = _sum(F(j / M) for j in range(M))
    estimate = total / M
    scale = abs_total / M
    converged = False
    difference = math.inf
    for _ in range(refine_limit):
        new_total, new_abs = _sum(F((2 * j + 1) / (2 * M)) for j in range(M))
        refined = (estimate * M + new_total) / (2 * M)
        scale = (scale * M + new_abs) / (2 * M)
        M *= 2
        difference = abs(refined - estimate)
        estimate = refined
        if difference <= gate_tol * max(scale, abs(estimate), SMALLEST_NORMAL):
            converged = True
            break

    logger.debug(f"unit-interval rule: {M} nodes, change {difference:.3e}")
    return SeriesResult(estimate, M, difference, converged, {"scale": scale})


def trig_product_components(frequencies: Sequence[float],
                            phases: Sequence[float]) -> List[Tuple[float, float, float]]:
    """Expand prod_j sin(w_j x + p_j) into sum of A cos(W x) + B sin(W x), W >= 0

    Returns (W, A, B) triples with negligible terms dropped.
    """
    coefficients = {}
    n = len(frequencies)
    for signs in itertools.product((1, -1), repeat=n):
        omega = sum(s * w for s, w in zip(signs, frequencies))
        phase = sum(s * p for s, p in zip(signs, phases))
        weight = np.prod([s for s in signs]) / (2j) ** n
        key = round(omega, 12)
        coefficients[key] = coefficients.get(key, 0j) + weight * np.exp(1j * phase)

    components = []
    for omega, coeff in coefficients.items():
        if omega < 0:
            continue
        if omega == 0:
            components.append((0.0, coeff.real, 0.0))
            continue
        partner = coefficients.get(round(-omega, 12), 0j)
        # C e^{iWx} + C' e^{-iWx} for a real product
        A = (coeff + partner).real
        B = (1j * (coeff - partner)).real
        components.append((float(omega), float(A), float(B)))
    return [(w, A, B) for w, A, B in components if abs(A) > 1e-15 or abs(B) > 1e-15]


def oscillatory_even_integral(integrand: Callable[[float], float], envelope: Callable[[float], float],
                              frequencies: Sequence[float], phases: Sequence[float],
                              x0: float, rtol: float = 1e-6) -> SeriesResult:
    """Integral over R of an even integrand that, for x > x0, equals
    envelope(x) * prod_j sin(w_j x + p_j) with an algebraically decaying envelope

    [0, x0] goes to adaptive quadrature; every Fourier component of the tail
    goes to the Fourier-weighted half-line rule.
    """
    errors = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        near, near_err = integrate.quad(integrand, 0.0, x0, limit=400, epsabs=1e-14, epsrel=1e-12)
        errors.append(near_err)
        tail = 0.0
        for omega, A, B in trig_product_components(frequencies, phases):
            if omega == 0:
                value, err = integrate.quad(envelope, x0, np.inf, limit=400, epsabs=1e-14)
                tail += A * value
                errors.append(abs(A) * err)
                continue
            if A:
                value, err = integrate.quad(envelope, x0, np.inf, weight='cos', wvar=omega, limlst=200)
                tail += A * value
                errors.append(abs(A) * err)
            if B:
                value, err = integrate.quad(envelope, x0, np.inf, weight='sin', wvar=omega, limlst=200)
                tail += B * value
                errors.append(abs(B) * err)

    total = 2 * (near + tail)
    error = 2 * sum(errors)
    converged = error <= rtol * max(abs(total), 1.0)
    if not converged:
        logger.warning(f"Oscillatory quadrature error estimate {error:.3e} above tolerance")
    return SeriesResult(complex(total), len(errors), error, converged, {"near": near, "tail": tail})


__all__ = [
    "MAX_HALF_WIDTH", "QuadratureSpec", "fit_envelope", "integrate_real_line", "integrate_unit_periodic",
    "oscillatory_even_integral", "trig_product_components",
]
