# qseries/hyper.py
"""
Series engines: terminating/convergent rphi_s, two-tailed bilateral summation
and the Dougall 5H5 evaluation behind the symmetric beta integral
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from common.config import get_config
from common.errors import ConstraintError, DivergenceError, PoleError
from common.logger import get_module_logger
from qseries.core import (
    SMALLEST_NORMAL, NeumaierSum, ParamMultiset, QContext, SeriesResult, reciprocal_gamma_pair,
)

logger = get_module_logger("qhyper")

TERMINATING_RTOL = 1e-12
CONSECUTIVE_SMALL_TERMS = 5


@dataclass(frozen=True)
class PhiSpec:
    """Parameters of rphi_s(numerator; denominator; q, z)"""
    numerator: ParamMultiset
    denominator: ParamMultiset
    z: complex

    def __post_init__(self):
        object.__setattr__(self, 'z', complex(self.z))
        for name in ('numerator', 'denominator'):
            value = getattr(self, name)
            if not isinstance(value, ParamMultiset):
                object.__setattr__(self, name, ParamMultiset.series(*value))

    @classmethod
    def of(cls, numerator: Sequence[complex], denominator: Sequence[complex], z: complex) -> 'PhiSpec':
        return cls(ParamMultiset.series(*numerator), ParamMultiset.series(*denominator), z)

    @property
    def r(self) -> int:
        return len(self.numerator)

    @property
    def s(self) -> int:
        return len(self.denominator)

    def terminating_index(self, ctx: QContext) -> Optional[int]:
        """Smallest n >= 0 with some numerator entry equal to q^{-n}, if any"""
        log_abs_q = math.log(abs(ctx.q))
        best = None
        for a in self.numerator:
            if a == 0:
                continue
            n = round(-math.log(abs(a)) / log_abs_q)
            if n < 0 or n > ctx.max_terms:
                continue
            if abs(a * ctx.q ** n - 1) <= TERMINATING_RTOL:
                best = n if best is None else min(best, n)
        return best

    def check_denominators(self, ctx: QContext, upto: int) -> None:
        """Reject denominator entries b with b q^m = 1 for some 0 <= m < upto"""
        for j, b in enumerate(self.denominator):
            if b == 0:
                continue
            m = round(-math.log(abs(b)) / math.log(abs(ctx.q)))
            if 0 <= m < upto and abs(b * ctx.q ** m - 1) <= TERMINATING_RTOL:
                raise PoleError(
                    "Denominator parameter lies in {q^-m}",
                    {"index": j, "value": str(b), "m": m},
                )


def phi_rs(spec: PhiSpec, ctx: QContext) -> SeriesResult:
    """Basic hypergeometric series with the ((-1)^k q^{binom(k,2)})^{1+s-r} factor"""
    if spec.z == 0:
        return SeriesResult(1 + 0j, 1, 0.0, True)

    n_term = spec.terminating_index(ctx)
    excess = 1 + spec.s - spec.r

    if n_term is None:
        if excess < 0:
            raise DivergenceError(
                "Non-terminating series with r > s + 1 diverges",
                {"r": spec.r, "s": spec.s},
            )
        if excess == 0 and abs(spec.z) >= 1:
            raise DivergenceError("Non-terminating series needs |z| < 1", {"z": str(spec.z)})
        spec.check_denominators(ctx, ctx.max_terms)
    else:
        spec.check_denominators(ctx, n_term)

    q = ctx.q
    total = NeumaierSum(ctx.compensated)
    term = 1 + 0j
    total.add(term)
    qk = 1 + 0j
    k = 0
    tail = 0.0
    small_run = 0
    limit = n_term if n_term is not None else ctx.max_terms

    while k < limit:
        ratio = spec.z / (1 - qk * q)
        for a in spec.numerator:
            ratio *= (1 - a * qk)
        for b in spec.denominator:
            ratio /= (1 - b * qk)
        if excess:
            ratio *= (-qk) ** excess
        term *= ratio
        total.add(term)
        qk *= q
        k += 1

        if n_term is None:
            scale = max(abs(total.value), SMALLEST_NORMAL)
            r_abs = abs(ratio)
            tail = abs(term) * r_abs / (1 - r_abs) if r_abs < 1 else math.inf
            small_run = small_run + 1 if abs(term) <= ctx.eps_term * scale else 0
            if small_run >= 2 and tail <= ctx.eps_term * scale:
                break

    value = total.value
    if n_term is not None:
        return SeriesResult(value, n_term + 1, 0.0, True, {"terminating": n_term})

    converged = tail <= ctx.eps_term * max(abs(value), SMALLEST_NORMAL)
    if not converged:
        logger.warning(f"{spec.r}phi{spec.s} not converged after {k + 1} terms (z={spec.z})")
    return SeriesResult(value, k + 1, tail, converged)


@dataclass
class BilateralTermGen:
    """Term generator k -> t_k for a sum over all integers"""
    term: Callable[[int], complex]
    decay_hint: Optional[complex] = None


@dataclass
class _TailState:
    direction: int
    active: bool = True
    converged: bool = False
    small_run: int = 0
    last: complex = 0j
    last_ratio: float = math.nan
    tail_bound: float = 0.0
    index: int = 0
    ratios: List[Tuple[int, complex]] = field(default_factory=list)


def bilateral_sum(gen: BilateralTermGen, ctx: Optional[QContext] = None, *,
                  eps_term: Optional[float] = None, max_terms: Optional[int] = None) -> SeriesResult:
    """Sum t_k over k in Z in the order 0, +1, -1, +2, -2, ...

    Each tail stops after five consecutive terms below eps_term times the
    running maximum magnitude, once the geometric tail estimate is below the
    same threshold. The base q is not used, so plain sums may pass eps_term
    and max_terms without a context; missing settings come from the
    numerics configuration.
    """
    numerics = get_config().numerics
    if eps_term is None:
        eps_term = ctx.eps_term if ctx is not None else numerics.eps_term
    if max_terms is None:
        max_terms = ctx.max_terms if ctx is not None else numerics.max_terms
    compensated = ctx.compensated if ctx is not None else numerics.compensated
    if not eps_term > 0 or max_terms < 1:
        raise ConstraintError("bilateral_sum needs eps_term > 0 and max_terms >= 1",
                              {"eps_term": eps_term, "max_terms": max_terms})

    total = NeumaierSum(compensated)
    t0 = complex(gen.term(0))
    total.add(t0)
    running_max = abs(t0)
    tails = (_TailState(+1, last=t0), _TailState(-1, last=t0))
    terms_used = 1

    while any(t.active for t in tails):
        for tail in tails:
            if not tail.active:
                continue
            if tail.index >= max_terms:
                tail.active = False
                continue

            tail.index += 1
            k = tail.direction * tail.index
            value = complex(gen.term(k))
            total.add(value)
            terms_used += 1
            running_max = max(running_max, abs(value))

            if value != 0 and tail.last != 0:
                ratio = value / tail.last
                tail.ratios.append((k, ratio))
                tail.last_ratio = abs(ratio)
            elif value == 0:
                tail.last_ratio = 0.0
            tail.last = value

            threshold = eps_term * max(running_max, SMALLEST_NORMAL)
            tail.small_run = tail.small_run + 1 if abs(value) <= threshold else 0
            if tail.small_run >= CONSECUTIVE_SMALL_TERMS:
                r = tail.last_ratio
                estimate = abs(value) * r / (1 - r) if r < 1 else math.inf
                if estimate <= threshold:
                    tail.tail_bound = estimate
                    tail.converged = True
                    tail.active = False
                else:
                    tail.tail_bound = estimate

    converged = all(t.converged for t in tails)
    value = total.value
    diagnostics: Dict[str, object] = {
        "ratio_plus": tails[0].ratios[-1][1] if tails[0].ratios else None,
        "ratio_minus": tails[1].ratios[-1][1] if tails[1].ratios else None,
        "ratios_plus": tails[0].ratios,
        "ratios_minus": tails[1].ratios,
        "extent": (-tails[1].index, tails[0].index),
        "running_max": running_max,
    }
    if gen.decay_hint is not None and tails[0].ratios:
        hint = complex(gen.decay_hint)
        diagnostics["hint_mismatch"] = abs(tails[0].ratios[-1][1] - hint) / max(abs(hint), SMALLEST_NORMAL)

    if not converged:
        logger.warning(f"Bilateral sum not converged (extent {diagnostics['extent']})")
    else:
        logger.debug(f"Bilateral sum converged over {diagnostics['extent']}")

    tail_bound = tails[0].tail_bound + tails[1].tail_bound
    return SeriesResult(value, terms_used, tail_bound, converged, diagnostics)


# ---------------------------------------------------------------------------
# Dougall 5H5
# ---------------------------------------------------------------------------

DOUGALL_WINDOWS = (250, 500, 1000, 2000)


@dataclass(frozen=True)
class DougallResult:
    """Direct (extrapolated) bilateral sum next to the closed form"""
    direct: float
    closed_form: float
    window_sums: Tuple[float, ...]

    @property
    def relative_defect(self) -> float:
        return abs(self.direct - self.closed_form) / abs(self.closed_form)


def dougall_closed_form(a: Sequence[float]) -> float:
    """-(1/2 pi^2) Gamma(1 + sum a) / prod_{i<j} Gamma(1 + a_i + a_j)"""
    total = float(special.gamma(1 + sum(a)))
    for i in range(4):
        for j in range(i + 1, 4):
            total *= float(special.rgamma(1 + a[i] + a[j]))
    return -total / (2 * math.pi ** 2)


def _summand(a: Sequence[float], n: np.ndarray) -> np.ndarray:
    x = n + 0.25
    f = np.ones_like(x)
    for aj in a:
        f = f * reciprocal_gamma_pair(aj, x)
    return (4 * n + 1) * f


def _window_sum(a: Sequence[float], window: int) -> float:
    values = _summand(a, np.arange(-window, window, dtype=float))

    def term(k: int) -> complex:
        idx = k + window
        return values[idx] if 0 <= idx < values.size else 0.0

    result = bilateral_sum(BilateralTermGen(term), max_terms=window + 2 * CONSECUTIVE_SMALL_TERMS)
    return -result.as_complex().real / (4 * math.pi)


def dougall_5h5(a1: float, a2: float, a3: float, a4: float) -> DougallResult:
    """J = -(1/4pi) sum_n (4n+1) prod_j 1/(Gamma(1+a_j+x) Gamma(1+a_j-x)), x = n + 1/4

    The summand decays like |n|^{-3-2 sum a} without oscillating, so symmetric
    window sums are extrapolated in N^{-(2+s)}, N^{-(3+s)}, N^{-(4+s)}.
    """
    a = (float(a1), float(a2), float(a3), float(a4))
    if not sum(a) + 1 > 0:
        raise DivergenceError("Dougall sum needs a1+a2+a3+a4 > -1", {"sum": sum(a)})

    s = 2 * sum(a)
    windows = np.array(DOUGALL_WINDOWS, dtype=float)
    sums = np.array([_window_sum(a, int(w)) for w in DOUGALL_WINDOWS])

    scaled = windows / windows[0]
    design = np.column_stack([np.ones_like(scaled)] + [scaled ** -(p + s) for p in (2, 3, 4)])
    solution = np.linalg.solve(design, sums)
    direct = float(solution[0])

    logger.debug(f"Dougall windows {sums.tolist()} -> {direct}")
    return DougallResult(direct, dougall_closed_form(a), tuple(float(v) for v in sums))


__all__ = [
    "BilateralTermGen", "DougallResult", "PhiSpec", "bilateral_sum", "dougall_5h5",
    "dougall_closed_form", "phi_rs",
]
