# orthogonality/discrete/core.py
"""
Infinite discrete bilateral orthogonality on the lattice q^k alpha, k in Z:
per-family weights, Gram matrices, closed-form norms and the total mass
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from common.errors import ConstraintError, PoleError
from common.logger import get_module_logger, log_operation
from families.core import Family, FamilyTag, ZPoint, eval_poly_log
from qseries.core import (
    LogComplex, QContext, SeriesResult, binom2, log_qpoch, log_qpoch_many, qpoch_infinite_many,
    require_nonvanishing,
)
from qseries.hyper import BilateralTermGen, bilateral_sum

logger = get_module_logger("discrete")


def admissible_degree(fam: Family, ctx: QContext) -> Optional[int]:
    """Largest N with |qabcd| < |q|^{2N} for Askey-Wilson; None means unbounded"""
    if fam.tag is not FamilyTag.ASKEY_WILSON:
        return None
    product = abs(ctx.q * fam.params.product())
    if product >= 1:
        return -1
    bound = math.log(product) / (2 * math.log(abs(ctx.q)))
    return math.ceil(bound) - 1


@dataclass(frozen=True)
class DiscreteOrthoSpec:
    """Family, lattice offset alpha and degree range for a bilateral Gram computation"""
    fam: Family
    alpha: complex
    max_degree: int
    ctx: QContext

    def __post_init__(self):
        alpha = complex(self.alpha)
        object.__setattr__(self, 'alpha', alpha)
        if alpha == 0:
            raise ConstraintError("alpha must be nonzero")
        if self.max_degree < 0:
            raise ConstraintError("max_degree must be nonnegative", {"max_degree": self.max_degree})

        limit = admissible_degree(self.fam, self.ctx)
        if limit is not None and self.max_degree > limit:
            raise ConstraintError(
                "Askey-Wilson degree bound violated: need |qabcd| < |q|^{2N}",
                {"requested": self.max_degree, "admissible": limit},
            )

    @property
    def admissible(self) -> Optional[int]:
        return admissible_degree(self.fam, self.ctx)


@dataclass
class GramReport:
    """Computed bilateral inner products against their closed-form diagonal"""
    computed: np.ndarray
    closed_form_diag: np.ndarray
    defect: np.ndarray
    worst_offdiag: float
    worst_diag: float
    worst_asymmetry: float = 0.0
    failures: Dict[Tuple[int, int], str] = field(default_factory=dict)
    tail_ratios: Dict[int, Optional[complex]] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.computed.shape[0]

    def to_dict(self) -> Dict[str, object]:
        return {
            "worst_offdiag": self.worst_offdiag,
            "worst_diag": self.worst_diag,
            "worst_asymmetry": self.worst_asymmetry,
            "defect": self.defect.tolist(),
            "failures": {f"{m},{n}": msg for (m, n), msg in self.failures.items()},
        }


def one_plus_power(log_t: complex) -> LogComplex:
    """1 + exp(log_t) without overflowing for large Re(log_t)"""
    if log_t.real <= 0:
        return LogComplex.from_complex(1 + cmath.exp(log_t))
    return LogComplex.from_log(log_t) * (1 + cmath.exp(-log_t))


class LatticeEvaluator:
    """Cached weights and polynomial values on the lattice q^k alpha"""

    def __init__(self, spec: DiscreteOrthoSpec):
        self.spec = spec
        self.ctx = spec.ctx
        self._log_q = cmath.log(spec.ctx.q)
        self._log_alpha = cmath.log(spec.alpha)
        self._poly_cache: Dict[Tuple[int, int], LogComplex] = {}
        self._weight_cache: Dict[int, LogComplex] = {}

    def point(self, k: int) -> ZPoint:
        return ZPoint(cmath.exp(k * self._log_q + self._log_alpha))

    def poly(self, n: int, k: int) -> LogComplex:
        key = (n, k)
        if key not in self._poly_cache:
            self._poly_cache[key] = eval_poly_log(self.spec.fam, n, self.point(k), self.ctx)
        return self._poly_cache[key]

    def weight(self, k: int) -> LogComplex:
        """(1 + q^{2k} alpha^2) times the family weight at index k"""
        if k not in self._weight_cache:
            self._weight_cache[k] = self._weight(k)
        return self._weight_cache[k]

    def _weight(self, k: int) -> LogComplex:
        spec = self.spec
        q, alpha, params = spec.ctx.q, spec.alpha, spec.fam.params
        r = len(params)

        lattice = one_plus_power(2 * k * self._log_q + 2 * self._log_alpha)
        base = q * (-1) ** (4 - r) * alpha ** (4 - r) * params.product()
        weight = (lattice * LogComplex.from_power(q, (4 - r) * binom2(k))
                  * LogComplex.from_power(base, k))
        if r == 0:
            return weight

        upper = log_qpoch_many(params.divided_into(alpha), self.ctx, k)
        lower = log_qpoch_many(params.scaled(-q * alpha), self.ctx, k)
        if lower.is_zero:
            raise PoleError("Weight denominator vanishes on the lattice", {"k": k})
        return weight * upper / lower

    def summand(self, m: int, n: int, k: int) -> complex:
        try:
            value = (self.poly(m, k) * self.poly(n, k)) * self.weight(k)
        except PoleError as e:
            raise PoleError(f"Lattice pole at k={k}: {e}", {**e.details, "k": k}) from e
        return value.to_complex()


def _decay_hint(spec: DiscreteOrthoSpec, m: int, n: int) -> Optional[complex]:
    if spec.fam.tag is FamilyTag.ASKEY_WILSON:
        return spec.ctx.q ** (1 - m - n) * spec.fam.params.product()
    return None


def discrete_inner(spec: DiscreteOrthoSpec, m: int, n: int,
                   evaluator: Optional[LatticeEvaluator] = None) -> SeriesResult:
    """Bilateral sum of (1 + q^{2k} alpha^2) w_k p_m(q^k alpha) p_n(q^k alpha)"""
    limit = spec.admissible
    if limit is not None and max(m, n) > limit:
        raise ConstraintError("Degree exceeds the admissible bound", {"m": m, "n": n, "admissible": limit})

    evaluator = evaluator or LatticeEvaluator(spec)
    gen = BilateralTermGen(lambda k: evaluator.summand(m, n, k), _decay_hint(spec, m, n))
    result = bilateral_sum(gen, spec.ctx)
    logger.debug(f"{spec.fam.tag.value} <{m},{n}> = {result.as_complex()} over {result.diagnostics['extent']}")
    return result


def family_product_factor(fam: Family, ctx: QContext) -> LogComplex:
    """alpha-free infinite-product part of the norm"""
    params = fam.params
    tag = fam.tag
    q = ctx.q
    if tag in (FamilyTag.BIG_HERMITE, FamilyTag.HERMITE):
        return LogComplex.one()

    numerator = qpoch_infinite_many((-q * p for p in params.pairwise_products()), ctx).as_log()
    if tag is FamilyTag.ASKEY_WILSON:
        denominator = require_nonvanishing(qpoch_infinite_many((q * params.product(),), ctx), "(qabcd;q)_inf")
        return numerator / denominator
    return numerator


def finite_norm_factor(fam: Family, n: int, ctx: QContext) -> LogComplex:
    """n-dependent finite part of the squared norm"""
    q = ctx.q
    params = fam.params
    tag = fam.tag
    C = binom2(n)
    qq = log_qpoch(q, ctx, n)

    if tag in (FamilyTag.BIG_HERMITE, FamilyTag.HERMITE):
        return LogComplex.from_power(q, -C - n) * qq

    pairs = log_qpoch_many((-1 / p for p in params.pairwise_products()), ctx, n)
    if tag is FamilyTag.AL_SALAM_CHIHARA:
        a, b = params
        return LogComplex.from_power(q, -2 * C) * LogComplex.from_power(a * b / q, n) * qq * pairs
    if tag is FamilyTag.DUAL_HAHN:
        a, b, c = params
        return (LogComplex.from_power(q, -4 * C) * LogComplex.from_power((a * b * c) ** 2 / q, n)
                * qq * pairs)

    abcd = params.product()
    ratio = log_qpoch(1 / (q * abcd), ctx, 2 * n) / (log_qpoch(1 / (q * abcd), ctx, n)
                                                    * log_qpoch(1 / abcd, ctx, 2 * n))
    return (LogComplex.from_power(q, -6 * C) * LogComplex.from_power(-abcd * abcd, n)
            * qq * pairs * ratio)


def alpha_theta_factor(alpha: complex, ctx: QContext) -> LogComplex:
    """(q, -alpha^2, -q/alpha^2; q)_inf"""
    a2 = alpha * alpha
    return qpoch_infinite_many((ctx.q, -a2, -ctx.q / a2), ctx).as_log()


def alpha_param_factor(fam: Family, alpha: complex, ctx: QContext) -> LogComplex:
    """(-q alpha a, q a / alpha; q)_inf over the parameter multiset"""
    params = fam.params
    args = list(params.scaled(-ctx.q * alpha)) + list(params.scaled(ctx.q / alpha))
    return qpoch_infinite_many(args, ctx).as_log()


def closed_norm_log(spec: DiscreteOrthoSpec, n: int) -> LogComplex:
    ctx = spec.ctx
    denominator = alpha_param_factor(spec.fam, spec.alpha, ctx)
    if denominator.is_zero:
        raise PoleError("Infinite-product denominator (-q alpha a, q a/alpha; q)_inf vanishes")
    return (alpha_theta_factor(spec.alpha, ctx) * family_product_factor(spec.fam, ctx)
            / denominator * finite_norm_factor(spec.fam, n, ctx))


def closed_norm(spec: DiscreteOrthoSpec, n: int) -> complex:
    """Right-hand side of the bilateral orthogonality relation at degree n"""
    return closed_norm_log(spec, n).to_complex()


@log_operation("discrete_gram")
def gram(spec: DiscreteOrthoSpec) -> GramReport:
    """Gram matrix for degrees 0..max_degree with per-entry defects"""
    size = spec.max_degree + 1
    computed = np.full((size, size), np.nan, dtype=complex)
    closed = np.array([closed_norm(spec, n) for n in range(size)], dtype=complex)
    defect = np.full((size, size), np.inf)
    failures: Dict[Tuple[int, int], str] = {}
    tail_ratios: Dict[int, Optional[complex]] = {}
    evaluator = LatticeEvaluator(spec)

    for m in range(size):
        for n in range(size):
            try:
                result = discrete_inner(spec, m, n, evaluator)
            except (PoleError, ConstraintError, OverflowError) as e:
                failures[(m, n)] = str(e)
                logger.warning(f"Gram entry ({m},{n}) failed: {e}")
                continue
            if not result.converged:
                failures[(m, n)] = "bilateral sum did not converge"
            value = result.as_complex()
            computed[m, n] = value
            if m == n:
                tail_ratios[n] = result.diagnostics.get("ratio_plus")
                entry = abs(value - closed[n]) / abs(closed[n])
            else:
                entry = abs(value) / math.sqrt(abs(closed[m]) * abs(closed[n]))
            if (m, n) in failures:
                entry = math.inf
            defect[m, n] = entry

    # both triangles are summed independently
    scale = np.sqrt(np.outer(np.abs(closed), np.abs(closed)))
    asymmetry = np.abs(computed - computed.T) / scale
    asymmetry = asymmetry[np.isfinite(asymmetry)]

    offdiag = defect[~np.eye(size, dtype=bool)]
    report = GramReport(
        computed=computed,
        closed_form_diag=closed,
        defect=defect,
        worst_offdiag=float(offdiag.max()) if offdiag.size else 0.0,
        worst_diag=float(np.diag(defect).max()),
        worst_asymmetry=float(asymmetry.max()) if asymmetry.size else 0.0,
        failures=failures,
        tail_ratios=tail_ratios,
    )
    logger.info(
        f"{spec.fam.tag.value} gram N={spec.max_degree}: "
        f"offdiag {report.worst_offdiag:.3e}, diag {report.worst_diag:.3e}, asymmetry {report.worst_asymmetry:.1e}"
    )
    return report


def total_mass(params4: Sequence[complex], alpha: complex, ctx: QContext) -> Tuple[complex, complex]:
    """Direct bilateral sum and closed product for the (0,0) Askey-Wilson entry"""
    spec = DiscreteOrthoSpec(Family.of(FamilyTag.ASKEY_WILSON, *params4), alpha, 0, ctx)
    closed = closed_norm(spec, 0)
    direct = discrete_inner(spec, 0, 0).as_complex()
    return direct, closed


def tail_ratio_check(spec: DiscreteOrthoSpec, n: int, min_index: int = 20) -> Tuple[Optional[float], Optional[float]]:
    """Empirical +infinity tail ratio of the (n,n) summand next to |q^{1-2n} abcd|

    Measured as |t_k / t_{k-1}| at the first k >= min_index, where the sum has
    settled into its geometric regime.
    """
    result = discrete_inner(spec, n, n)
    expected = _decay_hint(spec, n, n)
    empirical = None
    for k, ratio in result.diagnostics["ratios_plus"]:
        if k >= min_index:
            empirical = abs(ratio)
            break
    return empirical, (abs(expected) if expected is not None else None)


__all__ = [
    "DiscreteOrthoSpec", "GramReport", "LatticeEvaluator", "admissible_degree", "alpha_param_factor",
    "alpha_theta_factor", "closed_norm", "closed_norm_log", "discrete_inner", "family_product_factor",
    "finite_norm_factor", "gram", "tail_ratio_check", "total_mass",
]
