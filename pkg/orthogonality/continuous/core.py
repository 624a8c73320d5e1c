# orthogonality/continuous/core.py
"""
Continuous correspondences: Gaussian-type weights on the real line, the
J(alpha|q) integral, continuous orthogonality of the five families, the
lattice/real-line correspondence, the q-beta integral and its q -> 1 limit
"""

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from common.errors import ConstraintError, ConvergenceError, DivergenceError
from common.logger import get_module_logger, log_operation
from families.core import Family, FamilyTag, ZPoint, eval_poly_log
from orthogonality.continuous.quadrature import (
    QuadratureSpec, fit_envelope, integrate_real_line, integrate_unit_periodic, oscillatory_even_integral,
)
from orthogonality.discrete.core import (
    DiscreteOrthoSpec, admissible_degree, alpha_param_factor, alpha_theta_factor, discrete_inner,
    family_product_factor, finite_norm_factor, one_plus_power,
)
from qseries.core import (
    LogComplex, QContext, SeriesResult, gamma_ratio, qpoch_infinite, qpoch_infinite_many,
    reciprocal_gamma_pair,
)
from qseries.hyper import DougallResult, dougall_5h5

logger = get_module_logger("continuous")

UnitPeriodic = Callable[[float], float]


def _require_real_q(ctx: QContext) -> float:
    if not ctx.is_real:
        raise ConstraintError("Continuous relations need real q in (0, 1)", {"q": str(ctx.q)})
    return ctx.q.real


def _require_positive_alpha(alpha: float) -> float:
    if isinstance(alpha, complex):
        if alpha.imag != 0:
            raise ConstraintError("alpha must be a positive real", {"alpha": str(alpha)})
        alpha = alpha.real
    if not alpha > 0:
        raise ConstraintError("alpha must be a positive real", {"alpha": alpha})
    return float(alpha)


def omega2(x: float, q: float) -> float:
    """q^{2x^2}"""
    return math.exp(2 * x * x * math.log(q))


def w2_weight(x: float, q: float) -> float:
    """exp(-2 [log(x + sqrt(x^2+1))]^2 / log(1/q))"""
    return math.exp(-2 * math.asinh(x) ** 2 / -math.log(q))


def hermite_symmetric_weight(x: float, q: float) -> float:
    """(q^x + q^{-x}) q^{2x^2}, the symmetric form of (1 + q^{2x}) q^{2x^2 - x}"""
    return (q ** x + q ** -x) * omega2(x, q)


def gaussian_constant(alpha: float, ctx: QContext) -> float:
    """sqrt(2 pi) alpha exp(2 (log alpha)^2 / log(1/q)) / (q^{1/8} sqrt(log(1/q)))"""
    q = _require_real_q(ctx)
    alpha = _require_positive_alpha(alpha)
    L = -math.log(q)
    return math.sqrt(2 * math.pi) * alpha * math.exp(2 * math.log(alpha) ** 2 / L) / (q ** 0.125 * math.sqrt(L))


def peak_center(alpha: float, ctx: QContext) -> float:
    """Maximum of q^{2x^2 - x} alpha^{4x}"""
    return 0.25 + math.log(alpha) / ctx.log_q_inv


@dataclass(frozen=True)
class WeightSpec:
    """Continuous weight (1 + q^{2x} alpha^2)(-q^{x+1} alpha a, q^{1-x} a/alpha; q)_inf q^{2x^2-x} alpha^{4x}"""
    fam: Family
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, 'alpha', _require_positive_alpha(self.alpha))

    def log_weight(self, x: float, ctx: QContext) -> LogComplex:
        q = ctx.q.real
        alpha = self.alpha
        log_q = math.log(q)
        log_alpha = math.log(alpha)

        lattice = one_plus_power(complex(2 * x * log_q + 2 * log_alpha))
        gaussian = LogComplex((2 * x * x - x) * log_q + 4 * x * log_alpha)
        weight = lattice * gaussian

        params = self.fam.params
        if len(params):
            qx = math.exp(x * log_q)
            args = [-qx * q * alpha * a for a in params] + [q / qx * a / alpha for a in params]
            weight = weight * qpoch_infinite_many(args, ctx).as_log()
        return weight

    def value(self, x: float, ctx: QContext) -> complex:
        return self.log_weight(x, ctx).to_complex()


def continuous_integrand(weight: WeightSpec, m: int, n: int, ctx: QContext,
                         omega: Optional[UnitPeriodic] = None) -> Callable[[float], complex]:
    """x -> w(x) p_m(q^x alpha) p_n(q^x alpha) [omega(x)]"""
    log_q = math.log(ctx.q.real)
    log_alpha = math.log(weight.alpha)

    def f(x: float) -> complex:
        pt = ZPoint(math.exp(x * log_q + log_alpha))
        value = (eval_poly_log(weight.fam, m, pt, ctx) * eval_poly_log(weight.fam, n, pt, ctx)
                 * weight.log_weight(x, ctx)).to_complex()
        return value * omega(x) if omega is not None else value

    return f


def _check_degree_bound(fam: Family, m: int, n: int, ctx: QContext) -> None:
    """|abcd| < |q|^{2N-1} for Askey-Wilson, the same inequality as the lattice bound"""
    limit = admissible_degree(fam, ctx)
    if limit is not None and max(m, n) > limit:
        raise ConstraintError(
            "Askey-Wilson degree bound violated: need |abcd| < |q|^{2N-1}",
            {"m": m, "n": n, "admissible": limit},
        )


def integrate_continuous(fam: Family, alpha: float, m: int, n: int, ctx: QContext,
                         omega: Optional[UnitPeriodic] = None) -> SeriesResult:
    """Real-line trapezoid of the full integrand with an envelope-fitted window"""
    _require_real_q(ctx)
    _check_degree_bound(fam, m, n, ctx)
    weight = WeightSpec(fam, alpha)
    f = continuous_integrand(weight, m, n, ctx, omega)
    spec = QuadratureSpec.gaussian(ctx.q.real, peak_center(weight.alpha, ctx), ctx.eps_term)
    spec = fit_envelope(f, spec)
    result = integrate_real_line(f, spec)
    logger.debug(f"{fam.tag.value} K[{m},{n}] half-width {spec.half_width:.1f}: {result.as_complex()}")
    return result


def continuous_inner(fam: Family, alpha: float, m: int, n: int, ctx: QContext) -> complex:
    """K_{m,n}(alpha) = integral over R of the weighted product p_m p_n"""
    result = integrate_continuous(fam, alpha, m, n, ctx)
    if not result.converged:
        raise ConvergenceError(
            "Real-line quadrature did not pass its halving gate",
            {"family": fam.tag.value, "m": m, "n": n, "change": result.tail_bound},
        )
    return result.as_complex()


def hermite_symmetric_inner(m: int, n: int, ctx: QContext) -> complex:
    """Integral of (q^x + q^{-x}) H_m(q^x) H_n(q^x) q^{2x^2}, the alpha = 1 Hermite relation"""
    q = _require_real_q(ctx)
    fam = Family(FamilyTag.HERMITE)
    log_q = math.log(q)

    def f(x: float) -> complex:
        pt = ZPoint(math.exp(x * log_q))
        return (eval_poly_log(fam, m, pt, ctx) * eval_poly_log(fam, n, pt, ctx)).to_complex() \
            * hermite_symmetric_weight(x, q)

    spec = fit_envelope(f, QuadratureSpec.gaussian(q, 0.0, ctx.eps_term))
    result = integrate_real_line(f, spec)
    if not result.converged:
        raise ConvergenceError("Symmetric Hermite quadrature did not converge", {"m": m, "n": n})
    return result.as_complex()


def continuous_norm(fam: Family, alpha: float, n: int, ctx: QContext) -> complex:
    """Closed form of K_{n,n}(alpha): Gaussian constant times the alpha-free norm factors"""
    _check_degree_bound(fam, n, n, ctx)
    factor = family_product_factor(fam, ctx) * finite_norm_factor(fam, n, ctx)
    return gaussian_constant(alpha, ctx) * factor.to_complex()


# ---------------------------------------------------------------------------
# Lattice sums and the unit-interval correspondence
# ---------------------------------------------------------------------------

def psi_sum(fam: Family, alpha: float, m: int, n: int, ctx: QContext) -> complex:
    """Lattice sum with the continuous weight sampled at x = k, k in Z"""
    spec = DiscreteOrthoSpec(fam, alpha, max(m, n), ctx)
    inner = discrete_inner(spec, m, n)
    return (inner.as_log() * alpha_param_factor(fam, alpha, ctx)).to_complex()


def psi_closed(fam: Family, alpha: float, n: int, ctx: QContext) -> complex:
    """(q, -alpha^2, -q/alpha^2; q)_inf times the alpha-free norm factors"""
    return (alpha_theta_factor(alpha, ctx) * family_product_factor(fam, ctx)
            * finite_norm_factor(fam, n, ctx)).to_complex()


def unit_interval_integral(fam: Family, alpha: float, m: int, n: int, ctx: QContext,
                           omega: Optional[UnitPeriodic] = None) -> SeriesResult:
    """Integral over [0, 1) of Psi_{m,n}(q^x alpha) q^{2x^2 - x} alpha^{4x} [omega(x)]

    The integrand is 1-periodic, so the equispaced rule converges geometrically.
    """
    q = _require_real_q(ctx)
    alpha = _require_positive_alpha(alpha)
    log_q, log_alpha = math.log(q), math.log(alpha)

    def F(x: float) -> complex:
        shifted = math.exp(x * log_q + log_alpha)
        value = psi_sum(fam, shifted, m, n, ctx) * math.exp((2 * x * x - x) * log_q + 4 * x * log_alpha)
        return value * omega(x) if omega is not None else value

    return integrate_unit_periodic(F)


@dataclass(frozen=True)
class CorrespondenceReport:
    """Real-line integral against the unit-interval lattice integral"""
    family: str
    m: int
    n: int
    real_line: complex
    unit_interval: complex
    closed_form: Optional[complex]
    scale: float

    @property
    def defect(self) -> float:
        return abs(self.real_line - self.unit_interval) / self.scale

    @property
    def closed_defect(self) -> Optional[float]:
        if self.closed_form is None:
            return None
        return abs(self.real_line - self.closed_form) / self.scale


@log_operation("discrete_to_continuous")
def discrete_to_continuous_check(fam: Family, alpha: float, m: int, n: int, ctx: QContext,
                                 omega: Optional[UnitPeriodic] = None) -> CorrespondenceReport:
    """Both sides of K_{m,n} = integral_0^1 Psi_{m,n}(q^x alpha) q^{2x^2-x} alpha^{4x} dx

    With a unit-periodic omega both integrands are multiplied by omega(x) and the
    equality persists; the closed form is only reported for omega = 1.
    """
    real_line = integrate_continuous(fam, alpha, m, n, ctx, omega)
    unit = unit_interval_integral(fam, alpha, m, n, ctx, omega)
    scale = math.sqrt(abs(continuous_norm(fam, alpha, m, ctx)) * abs(continuous_norm(fam, alpha, n, ctx)))
    closed = None
    if omega is None:
        closed = continuous_norm(fam, alpha, n, ctx) if m == n else 0j
    return CorrespondenceReport(
        fam.tag.value, m, n, real_line.as_complex(), unit.as_complex(), closed, scale,
    )


# ---------------------------------------------------------------------------
# Gaussian and J integrals
# ---------------------------------------------------------------------------

def gaussian_power_integral(a: float, alpha: float) -> float:
    """Closed form of the integral of exp(-x^2) alpha^{a x} over R"""
    alpha = _require_positive_alpha(alpha)
    return math.sqrt(math.pi) * math.exp(0.25 * a * a * math.log(alpha) ** 2)


def gaussian_power_quadrature(a: float, alpha: float) -> SeriesResult:
    alpha = _require_positive_alpha(alpha)
    log_alpha = math.log(alpha)
    center = 0.5 * a * log_alpha
    spec = QuadratureSpec.from_config(8.0, center)
    return integrate_real_line(lambda x: math.exp(-x * x + a * x * log_alpha), spec)


def j_closed_form(alpha: float, ctx: QContext) -> float:
    """sqrt(2pi) alpha exp(2(log alpha)^2/log(1/q)) / (q^{1/8} sqrt(log(1/q)) (q;q)_inf)"""
    euler = qpoch_infinite(ctx.q, ctx).as_complex().real
    return gaussian_constant(alpha, ctx) / euler


def _j_unit_integrand(alpha: float, ctx: QContext) -> Callable[[float], complex]:
    q = ctx.q.real
    log_q, log_alpha = math.log(q), math.log(alpha)

    def F(x: float) -> complex:
        q2x = math.exp(2 * x * log_q)
        theta = qpoch_infinite_many((-q2x * alpha * alpha, -q / (q2x * alpha * alpha)), ctx).as_log()
        return (theta * LogComplex((2 * x * x - x) * log_q + 4 * x * log_alpha)).to_complex()

    return F


@dataclass(frozen=True)
class JIntegralReport:
    unit_interval: float
    real_line_scaled: float
    closed_form: float

    @property
    def worst_defect(self) -> float:
        ref = abs(self.closed_form)
        return max(abs(self.unit_interval - self.closed_form), abs(self.real_line_scaled - self.closed_form)) / ref


def j_integral(alpha: float, ctx: QContext) -> Tuple[float, float]:
    """(unit-interval quadrature of the product form, closed form)"""
    _require_real_q(ctx)
    alpha = _require_positive_alpha(alpha)
    unit = integrate_unit_periodic(_j_unit_integrand(alpha, ctx))
    if not unit.converged:
        raise ConvergenceError("J integral quadrature did not converge", {"alpha": alpha})
    return unit.as_complex().real, j_closed_form(alpha, ctx)


def j_integral_triangulation(alpha: float, ctx: QContext) -> JIntegralReport:
    """Unit-interval form, real-line form divided by (q;q)_inf, and the closed form"""
    unit, closed = j_integral(alpha, ctx)
    euler = qpoch_infinite(ctx.q, ctx).as_complex().real
    real_line = continuous_inner(Family(FamilyTag.HERMITE), alpha, 0, 0, ctx).real / euler
    return JIntegralReport(unit, real_line, closed)


# ---------------------------------------------------------------------------
# q-beta integral and its q -> 1 limit
# ---------------------------------------------------------------------------

def qbeta_integral(alpha: float, params4: Sequence[float], ctx: QContext) -> Tuple[complex, complex]:
    """(real-line quadrature of the Askey-Wilson weight, closed product form)"""
    _require_real_q(ctx)
    if len(params4) != 4:
        raise ConstraintError("q-beta integral takes four parameters", {"given": len(params4)})
    abcd = abs(np.prod(np.asarray(params4, dtype=complex)))
    if not abcd < 1 / abs(ctx.q):
        raise ConstraintError("q-beta integral needs |abcd| < |q|^{-1}", {"abcd": float(abcd)})

    fam = Family.of(FamilyTag.ASKEY_WILSON, *params4)
    quadrature = continuous_inner(fam, alpha, 0, 0, ctx)
    closed = continuous_norm(fam, alpha, 0, ctx)
    return quadrature, closed


@dataclass(frozen=True)
class BetaIntegralReport:
    quadrature: float
    dougall: float
    closed_form: float
    quadrature_error: float

    def defects(self) -> Dict[str, float]:
        ref = abs(self.closed_form)
        return {
            "dougall": abs(self.dougall - self.closed_form) / ref,
            "quadrature": abs(self.quadrature - self.closed_form) / ref,
        }


def beta_integrand(a: Sequence[float]) -> Callable[[float], float]:
    """1/Gamma(2x, -2x, 1 +- a_j + x ...) = -(2/pi) x sin(2 pi x) prod_j 1/(Gamma(1+a_j+x)Gamma(1+a_j-x))"""
    def f(x: float) -> float:
        value = -2.0 / math.pi * x * math.sin(2 * math.pi * x)
        for aj in a:
            value *= reciprocal_gamma_pair(aj, x)
        return value
    return f


def beta_quadrature(a: Sequence[float]) -> SeriesResult:
    """Oscillation-aware quadrature of the symmetric beta integral"""
    a = tuple(float(v) for v in a)
    x0 = max(a) + 2.0

    def envelope(x: float) -> float:
        value = -2.0 / math.pi * x
        for aj in a:
            value *= gamma_ratio(aj, x) / math.pi
        return value

    frequencies = (2 * math.pi,) + (math.pi,) * len(a)
    phases = (0.0,) + tuple(-math.pi * aj for aj in a)
    return oscillatory_even_integral(beta_integrand(a), envelope, frequencies, phases, x0)


@log_operation("beta_integral")
def beta_integral_check(a: float, b: float, c: float, d: float) -> BetaIntegralReport:
    """Quadrature, Dougall bilateral sum and closed form of the symmetric beta integral"""
    params = (a, b, c, d)
    if not sum(params) > -1:
        raise DivergenceError("Beta integral needs a+b+c+d > -1", {"sum": sum(params)})
    quad = beta_quadrature(params)
    dougall: DougallResult = dougall_5h5(*params)
    return BetaIntegralReport(quad.as_complex().real, dougall.direct, dougall.closed_form, quad.tail_bound)


def sin4_integrand(x: float) -> complex:
    """e^{2 i pi x} sin^4(pi x) / x^3, continued by 0 at the origin"""
    if x == 0:
        return 0j
    return cmath.exp(2j * math.pi * x) * math.sin(math.pi * x) ** 4 / x ** 3


def sin4_integral() -> complex:
    """Integral over R of sin4_integrand

    The real part integrates cos(2 pi x) sin^4(pi x) / x^3, which is odd and
    bounded at the origin (it behaves like pi^4 x there), so it is exactly
    zero. Only the even imaginary part goes through the oscillatory rule.
    """
    result = oscillatory_even_integral(
        lambda x: sin4_integrand(x).imag, lambda x: x ** -3, (2 * math.pi,) + (math.pi,) * 4, (0.0,) * 5, 1.0,
    )
    return complex(0.0, result.as_complex().real)


def fourier_pair_closed(a: float, t: float) -> float:
    """(2 cos(t/2))^{2a} / Gamma(2a + 1) on |t| < pi, zero outside"""
    if abs(t) >= math.pi:
        return 0.0
    return (2 * math.cos(t / 2)) ** (2 * a) * float(special.rgamma(2 * a + 1))


def ramanujan_fourier_pair(a: float, t: float) -> Tuple[float, float]:
    """(quadrature of the integral of e^{-ixt}/(Gamma(1+a+x)Gamma(1+a-x)), closed form)"""
    if not a > -0.5:
        raise ConstraintError("Fourier pair needs a > -1/2", {"a": a})
    x0 = max(a, 0.0) + 2.0

    def integrand(x: float) -> float:
        return math.cos(x * t) * reciprocal_gamma_pair(a, x)

    result = oscillatory_even_integral(
        integrand, lambda x: gamma_ratio(a, x) / math.pi, (t, math.pi), (math.pi / 2, -math.pi * a), x0,
    )
    return result.as_complex().real, fourier_pair_closed(a, t)


# ---------------------------------------------------------------------------
# q -> 1 constants
# ---------------------------------------------------------------------------

T_LIMIT = (2 * math.pi) ** -1.5


def t_constant(q: float) -> float:
    """exp(-pi^2/(2 log(1/q))) / ((q;q)_inf^3 (1-q)^{3/2}), assembled in log space"""
    if not 0 < q < 1:
        raise ConstraintError("T constant needs q in (0, 1)", {"q": q})
    ctx = QContext.from_config(q).sized_for_product()
    euler = qpoch_infinite(q, ctx)
    if not euler.converged:
        raise ConvergenceError("(q;q)_inf did not converge; raise max_terms", {"q": q})
    L = -math.log(q)
    log_t = -math.pi ** 2 / (2 * L) - 3 * euler.as_log().log_mag - 1.5 * math.log1p(-q)
    return math.exp(log_t)


def t_constant_sequence(q_sequence: Sequence[float]) -> List[float]:
    """T-expression along a sequence of q increasing toward 1"""
    values = [t_constant(q) for q in q_sequence]
    logger.debug(f"T sequence {list(q_sequence)} -> {values} (limit {T_LIMIT})")
    return values


__all__ = [
    "BetaIntegralReport", "CorrespondenceReport", "JIntegralReport", "T_LIMIT", "WeightSpec",
    "beta_integral_check", "beta_integrand", "beta_quadrature", "continuous_inner", "continuous_integrand",
    "continuous_norm", "discrete_to_continuous_check", "fourier_pair_closed", "gaussian_constant",
    "gaussian_power_integral", "gaussian_power_quadrature", "hermite_symmetric_inner", "hermite_symmetric_weight",
    "integrate_continuous", "j_closed_form", "j_integral", "j_integral_triangulation", "omega2", "psi_closed",
    "psi_sum", "qbeta_integral", "ramanujan_fourier_pair", "sin4_integral", "sin4_integrand", "t_constant",
    "t_constant_sequence", "unit_interval_integral", "w2_weight",
]
