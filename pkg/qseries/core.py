# qseries/core.py
"""
Core q-arithmetic: q-shifted factorials (finite, infinite, bilateral, multiset),
the modified theta function, the q-gamma function, reciprocal gamma helpers and
the log-scaled complex type used for overflow-safe prefactors
"""

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Iterable, Iterator, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special

from common.config import get_config
from common.errors import ConstraintError, ConvergenceError, PoleError
from common.logger import get_module_logger

logger = get_module_logger("qcore")

INFINITY = math.inf
TWO_PI = 2.0 * math.pi
# Threshold below which |value| is treated as zero when judging a tail bound
SMALLEST_NORMAL = np.finfo(float).tiny

Number = Union[int, float, complex]


def binom2(n: int) -> int:
    """binom(n, 2) for any integer n"""
    return n * (n - 1) // 2


def wrap_phase(phase: float) -> float:
    """Wrap an angle into (-pi, pi]"""
    wrapped = math.remainder(phase, TWO_PI)
    if wrapped <= -math.pi:
        wrapped += TWO_PI
    return wrapped


class NeumaierSum:
    """Running compensated sum (real or complex)"""

    def __init__(self, compensated: bool = True):
        self.compensated = compensated
        self._s_re = 0.0
        self._c_re = 0.0
        self._s_im = 0.0
        self._c_im = 0.0

    @staticmethod
    def _step(s: float, c: float, y: float) -> Tuple[float, float]:
        t = s + y
        if abs(s) >= abs(y):
            c += (s - t) + y
        else:
            c += (y - t) + s
        return t, c

    def add(self, value: Number) -> None:
        value = complex(value)
        if self.compensated:
            self._s_re, self._c_re = self._step(self._s_re, self._c_re, value.real)
            self._s_im, self._c_im = self._step(self._s_im, self._c_im, value.imag)
        else:
            self._s_re += value.real
            self._s_im += value.imag

    @property
    def value(self) -> complex:
        return complex(self._s_re + self._c_re, self._s_im + self._c_im)


@dataclass(frozen=True)
class LogComplex:
    """Complex number stored as natural-log magnitude plus phase in (-pi, pi]"""
    log_mag: float
    phase: float = 0.0

    @classmethod
    def zero(cls) -> 'LogComplex':
        return cls(-math.inf, 0.0)

    @classmethod
    def one(cls) -> 'LogComplex':
        return cls(0.0, 0.0)

    @classmethod
    def from_complex(cls, value: Number) -> 'LogComplex':
        value = complex(value)
        if value == 0:
            return cls.zero()
        if not cmath.isfinite(value):
            raise OverflowError(f"Cannot log-scale non-finite value {value}")
        return cls(math.log(abs(value)), wrap_phase(cmath.phase(value)))

    @classmethod
    def from_power(cls, base: Number, exponent: float) -> 'LogComplex':
        """base**exponent on the principal branch, without forming the power"""
        base = complex(base)
        if base == 0:
            if exponent > 0:
                return cls.zero()
            if exponent == 0:
                return cls.one()
            raise PoleError("Zero raised to a negative power", {"exponent": exponent})
        if float(exponent).is_integer():
            k = int(exponent)
            return cls(k * math.log(abs(base)), wrap_phase(k * cmath.phase(base)))
        return cls(exponent * math.log(abs(base)), wrap_phase(exponent * cmath.phase(base)))

    @classmethod
    def from_log(cls, log_value: complex) -> 'LogComplex':
        """exp(log_value) for a complex logarithm"""
        return cls(log_value.real, wrap_phase(log_value.imag))

    @staticmethod
    def product(factors: Iterable['LogComplex'], compensated: bool = False) -> 'LogComplex':
        mags = NeumaierSum(compensated)
        phase = 0.0
        for factor in factors:
            if factor.is_zero:
                return LogComplex.zero()
            mags.add(factor.log_mag)
            phase += factor.phase
        return LogComplex(mags.value.real, wrap_phase(phase))

    @property
    def is_zero(self) -> bool:
        return self.log_mag == -math.inf

    def __mul__(self, other: Union['LogComplex', Number]) -> 'LogComplex':
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        if self.is_zero or other.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mag + other.log_mag, wrap_phase(self.phase + other.phase))

    __rmul__ = __mul__

    def __truediv__(self, other: Union['LogComplex', Number]) -> 'LogComplex':
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        if other.is_zero:
            raise PoleError("Division by a vanishing log-scaled value")
        if self.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mag - other.log_mag, wrap_phase(self.phase - other.phase))

    def __pow__(self, exponent: int) -> 'LogComplex':
        if self.is_zero:
            if exponent > 0:
                return LogComplex.zero()
            if exponent == 0:
                return LogComplex.one()
            raise PoleError("Zero raised to a negative power")
        return LogComplex(exponent * self.log_mag, wrap_phase(exponent * self.phase))

    def reciprocal(self) -> 'LogComplex':
        return LogComplex.one() / self

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        magnitude = math.exp(self.log_mag)  # raises OverflowError past ~1e308
        return cmath.rect(magnitude, self.phase)

    def abs(self) -> float:
        return 0.0 if self.is_zero else math.exp(self.log_mag)


@dataclass(frozen=True)
class QContext:
    """Base q together with truncation and verification tolerances"""
    q: complex
    eps_term: float = 1e-16
    max_terms: int = 10000
    eps_verify: float = 1e-8
    compensated: bool = False

    def __post_init__(self):
        q = complex(self.q)
        object.__setattr__(self, 'q', q)

        if q == 0:
            raise ConstraintError("q must be nonzero", {"q": str(q)})
        if abs(q) >= 1:
            raise ConstraintError("q must satisfy 0 < |q| < 1", {"q": str(q)})
        if not self.eps_term > 0:
            raise ConstraintError("eps_term must be positive", {"eps_term": self.eps_term})
        if not self.eps_verify > 0:
            raise ConstraintError("eps_verify must be positive", {"eps_verify": self.eps_verify})
        if self.max_terms < 16:
            raise ConstraintError("max_terms must be at least 16", {"max_terms": self.max_terms})

    @classmethod
    def from_config(cls, q: Number, **overrides: Any) -> 'QContext':
        """Build a context from the global numerics configuration"""
        numerics = get_config().numerics
        settings = dict(
            eps_term=numerics.eps_term,
            max_terms=numerics.max_terms,
            eps_verify=numerics.eps_verify,
            compensated=numerics.compensated,
        )
        settings.update(overrides)
        return cls(q=q, **settings)

    def with_options(self, **changes: Any) -> 'QContext':
        return replace(self, **changes)

    def sized_for_product(self, a_abs: float = 1.0) -> 'QContext':
        """Context with enough factors for (a;q)_inf, |a| <= a_abs, to reach the eps_term tail bound"""
        abs_q = abs(self.q)
        floor = self.eps_term * (1 - abs_q) / (2 * max(a_abs, 1.0))
        needed = math.ceil(math.log(floor) / math.log(abs_q)) + 1
        if needed <= self.max_terms:
            return self
        return self.with_options(max_terms=needed)

    @property
    def is_real(self) -> bool:
        return self.q.imag == 0 and 0 < self.q.real < 1

    @property
    def real_q(self) -> float:
        if not self.is_real:
            raise ConstraintError("Operation requires real q in (0, 1)", {"q": str(self.q)})
        return self.q.real

    @property
    def log_q_inv(self) -> float:
        """log(1/q) for real q in (0, 1)"""
        return -math.log(self.real_q)

    def power(self, exponent: float) -> complex:
        """q**exponent (principal branch for non-integer exponents)"""
        if float(exponent).is_integer():
            return self.q ** int(exponent)
        return self.q ** exponent


@dataclass(frozen=True)
class ParamMultiset:
    """Ordered multiset of nonzero complex parameters"""
    entries: Tuple[complex, ...] = ()
    allow_zero: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        entries = tuple(complex(e) for e in self.entries)
        object.__setattr__(self, 'entries', entries)
        if not self.allow_zero:
            for i, entry in enumerate(entries):
                if entry == 0:
                    raise ConstraintError("Parameters must be nonzero", {"index": i})

    @classmethod
    def of(cls, *entries: Number) -> 'ParamMultiset':
        return cls(tuple(entries))

    @classmethod
    def series(cls, *entries: Number) -> 'ParamMultiset':
        """Series parameter lists, where 0 is a legitimate entry (e.g. 1phi1(q^-n; 0))"""
        return cls(tuple(entries), allow_zero=True)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[complex]:
        return iter(self.entries)

    def __getitem__(self, index: int) -> complex:
        return self.entries[index]

    def map(self, fn: Callable[[complex], Number]) -> 'ParamMultiset':
        return ParamMultiset(tuple(fn(e) for e in self.entries), allow_zero=self.allow_zero)

    def scaled(self, factor: Number) -> 'ParamMultiset':
        """{factor*a : a in self}"""
        return self.map(lambda e: factor * e)

    def divided_into(self, numerator: Number) -> 'ParamMultiset':
        """{numerator/a : a in self}"""
        return self.map(lambda e: numerator / e)

    def product(self) -> complex:
        result = 1 + 0j
        for entry in self.entries:
            result *= entry
        return result

    def pairwise_products(self) -> Tuple[complex, ...]:
        """a_i a_j for i < j, in lexicographic order"""
        e = self.entries
        return tuple(e[i] * e[j] for i in range(len(e)) for j in range(i + 1, len(e)))

    def extended(self, *extra: Number) -> 'ParamMultiset':
        return ParamMultiset(self.entries + tuple(complex(x) for x in extra), allow_zero=self.allow_zero)


@dataclass(frozen=True)
class SeriesResult:
    """Outcome of an infinite sum or product

    For products the value is a LogComplex and tail_bound bounds the absolute
    error of its logarithm, i.e. it is a relative error bound.
    """
    value: Union[complex, LogComplex]
    n_used: int
    tail_bound: float
    converged: bool
    diagnostics: Dict[str, Any] = field(default_factory=dict, compare=False)

    def as_complex(self) -> complex:
        if isinstance(self.value, LogComplex):
            return self.value.to_complex()
        return complex(self.value)

    def as_log(self) -> LogComplex:
        if isinstance(self.value, LogComplex):
            return self.value
        return LogComplex.from_complex(self.value)


# ---------------------------------------------------------------------------
# q-shifted factorials
# ---------------------------------------------------------------------------

def qpoch_finite(a: Number, ctx: QContext, n: int) -> complex:
    """(a;q)_n = prod_{j=0}^{n-1} (1 - a q^j), multiplied in ascending j"""
    if n < 0:
        raise ConstraintError("qpoch_finite needs n >= 0; use qpoch_bilateral_index", {"n": n})
    a = complex(a)
    result = 1 + 0j
    qj = 1 + 0j
    for _ in range(n):
        result *= (1 - a * qj)
        qj *= ctx.q
    return result


def qpoch_descending(a: Number, ctx: QContext, n: int) -> complex:
    """(a;q^{-1})_n by direct product prod_{j<n} (1 - a q^{-j})"""
    a = complex(a)
    result = 1 + 0j
    qinv_j = 1 + 0j
    for _ in range(n):
        result *= (1 - a * qinv_j)
        qinv_j /= ctx.q
    return result


def qpoch_finite_negbase(a: Number, ctx: QContext, n: int) -> complex:
    """(a;q^{-1})_n via q^{-binom(n,2)} (-a)^n (1/a;q)_n"""
    a = complex(a)
    if a == 0:
        raise ConstraintError("qpoch_finite_negbase needs a != 0")
    if n < 0:
        raise ConstraintError("qpoch_finite_negbase needs n >= 0", {"n": n})
    prefactor = LogComplex.from_power(ctx.q, -binom2(n)) * LogComplex.from_power(-a, n)
    return prefactor.to_complex() * qpoch_finite(1 / a, ctx, n)


def log_qpoch(a: Number, ctx: QContext, k: int) -> LogComplex:
    """(a;q)_k for any integer k, accumulated in log form

    Negative k follows (a;q)_{-m} = 1/(a q^{-m};q)_m.
    """
    a = complex(a)
    q = ctx.q
    if k >= 0:
        logs = NeumaierSum(ctx.compensated)
        phase = 0.0
        qj = 1 + 0j
        for _ in range(k):
            factor = 1 - a * qj
            if factor == 0:
                return LogComplex.zero()
            lf = cmath.log(factor)
            logs.add(lf.real)
            phase += lf.imag
            qj *= q
        return LogComplex(logs.value.real, wrap_phase(phase))

    m = -k
    logs = NeumaierSum(ctx.compensated)
    phase = 0.0
    qi = 1 + 0j
    for i in range(1, m + 1):
        qi /= q
        factor = 1 - a * qi
        if factor == 0:
            raise PoleError(
                "Pochhammer pole at negative index",
                {"a": str(a), "k": k, "pole_index": i},
            )
        lf = cmath.log(factor)
        logs.add(lf.real)
        phase += lf.imag
    return LogComplex(-logs.value.real, wrap_phase(-phase))


def qpoch_bilateral_index(a: Number, ctx: QContext, k: int) -> complex:
    """(a;q)_k for k in Z; raises PoleError when a = q^m with 1 <= m <= -k"""
    if k >= 0:
        return qpoch_finite(a, ctx, k)
    a = complex(a)
    m = -k
    denominator = 1 + 0j
    qi = 1 + 0j
    for i in range(1, m + 1):
        qi /= ctx.q
        factor = 1 - a * qi
        if factor == 0:
            raise PoleError(
                "Pochhammer pole at negative index",
                {"a": str(a), "k": k, "pole_index": i},
            )
        denominator *= factor
    return 1 / denominator


def qpoch_infinite(a: Number, ctx: QContext) -> SeriesResult:
    """(a;q)_inf as a log-scaled product with a rigorous relative tail bound"""
    a = complex(a)
    if a == 0:
        return SeriesResult(LogComplex.one(), 0, 0.0, True)

    q = ctx.q
    abs_q = abs(q)
    logs = NeumaierSum(ctx.compensated)
    phase = 0.0
    term = a
    n = 0
    tail = math.inf

    while n < ctx.max_terms:
        abs_term = abs(term)
        if abs_term < 1:
            tail = abs_term / ((1 - abs_q) * (1 - abs_term))
            if tail < ctx.eps_term:
                break
        factor = 1 - term
        if factor == 0:
            return SeriesResult(LogComplex.zero(), n + 1, 0.0, True, {"zero_factor_index": n})
        lf = cmath.log(factor)
        logs.add(lf.real)
        phase += lf.imag
        term *= q
        n += 1
    else:
        abs_term = abs(term)
        tail = abs_term / ((1 - abs_q) * (1 - abs_term)) if abs_term < 1 else math.inf

    converged = tail < ctx.eps_term
    if not converged:
        logger.warning(f"(a;q)_inf not converged within {ctx.max_terms} factors (a={a}, q={q})")

    return SeriesResult(LogComplex(logs.value.real, wrap_phase(phase)), n, tail, converged)


def qpoch_infinite_many(args: Iterable[Number], ctx: QContext) -> SeriesResult:
    """(a_1, a_2, ...; q)_inf"""
    value = LogComplex.one()
    n_used = 0
    tail = 0.0
    converged = True
    for a in args:
        part = qpoch_infinite(a, ctx)
        value = value * part.value
        n_used = max(n_used, part.n_used)
        tail += part.tail_bound
        converged = converged and part.converged
    return SeriesResult(value, n_used, tail, converged)


def qpoch_finite_many(args: Iterable[Number], ctx: QContext, n: int) -> complex:
    """(a_1, a_2, ...; q)_n"""
    result = 1 + 0j
    for a in args:
        result *= qpoch_finite(a, ctx, n)
    return result


def log_qpoch_many(args: Iterable[Number], ctx: QContext, k: int) -> LogComplex:
    return LogComplex.product((log_qpoch(a, ctx, k) for a in args), ctx.compensated)


def qpoch_multiset(ms: ParamMultiset, ctx: QContext,
                   n: Union[int, float]) -> Union[complex, SeriesResult]:
    """Product over the multiset of (a;q)_n; n = INFINITY gives a SeriesResult"""
    if n == INFINITY:
        return qpoch_infinite_many(ms, ctx)
    if n < 0:
        result = 1 + 0j
        for a in ms:
            result *= qpoch_bilateral_index(a, ctx, int(n))
        return result
    return qpoch_finite_many(ms, ctx, int(n))


def require_nonvanishing(product: SeriesResult, what: str) -> LogComplex:
    """Log value of a denominator product, raising PoleError if it vanishes"""
    if product.as_log().is_zero:
        raise PoleError(f"Denominator product vanishes: {what}")
    return product.as_log()


# ---------------------------------------------------------------------------
# Theta and gamma functions
# ---------------------------------------------------------------------------

def theta(z: Number, ctx: QContext) -> SeriesResult:
    """Modified theta function (z, q/z; q)_inf"""
    z = complex(z)
    if z == 0:
        raise ConstraintError("theta is undefined at z = 0")
    return qpoch_infinite_many((z, ctx.q / z), ctx)


def log_qgamma(x: float, ctx: QContext) -> LogComplex:
    """log-scaled Gamma_q(x) = (q;q)_inf (1-q)^{1-x} / (q^x;q)_inf"""
    q = ctx.real_q
    qx = math.exp(x * math.log(q))
    ctx = ctx.sized_for_product(max(1.0, qx))
    numerator = qpoch_infinite(q, ctx)
    denominator = qpoch_infinite(qx, ctx)

    if not (numerator.converged and denominator.converged):
        raise ConvergenceError(
            "q-gamma products did not converge; raise max_terms",
            {"q": q, "x": x, "max_terms": ctx.max_terms},
        )
    if denominator.as_log().is_zero or (x <= 0 and float(x).is_integer()):
        raise PoleError("q-gamma pole", {"x": x})

    if x == 1:
        return LogComplex.one()
    return numerator.as_log() * LogComplex.from_power(1 - q, 1 - x) / denominator.as_log()


def qgamma(x: float, ctx: QContext) -> float:
    """Gamma_q(x) for real q in (0, 1)"""
    return log_qgamma(x, ctx).to_complex().real


def gamma_recip(x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """1/Gamma(x); exactly 0 at the poles x = 0, -1, -2, ..."""
    result = special.rgamma(x)
    return float(result) if np.ndim(result) == 0 else result


def gamma_complex_recip(z: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
    """1/Gamma(z) for complex arguments"""
    result = special.rgamma(np.asarray(z, dtype=complex))
    return complex(result) if np.ndim(result) == 0 else result


def gamma_ratio(a: float, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Gamma(x - a) / Gamma(1 + a + x) for x > a, computed from log-gammas"""
    x = np.asarray(x, dtype=float)
    result = np.exp(special.gammaln(x - a) - special.gammaln(1 + a + x))
    return float(result) if result.ndim == 0 else result


# Past this |x| the reciprocal-gamma pair is assembled by reflection
_PAIR_DIRECT_LIMIT = 20.0


def reciprocal_gamma_pair(a: float, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """1/(Gamma(1+a+x) Gamma(1+a-x)), finite for all real x

    For large |x| the reflection Gamma(1+a-x)Gamma(x-a) = pi/sin(pi(x-a)) turns
    the pair into sin(pi(|x|-a))/pi * Gamma(|x|-a)/Gamma(1+a+|x|); the pair is even in x.
    """
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    with np.errstate(over='ignore', invalid='ignore'):
        direct = special.rgamma(1 + a + x) * special.rgamma(1 + a - x)
    far = ax > max(_PAIR_DIRECT_LIMIT, a + 1.0)
    if np.any(far):
        axf = ax[far] if ax.ndim else ax
        reflected = np.sin(np.pi * (axf - a)) / np.pi * gamma_ratio(a, axf)
        if ax.ndim:
            direct = np.where(far, 0.0, direct)
            direct[far] = reflected
        else:
            direct = reflected
    return float(direct) if np.ndim(direct) == 0 else direct


__all__ = [
    "INFINITY", "LogComplex", "NeumaierSum", "ParamMultiset", "QContext", "SeriesResult",
    "binom2", "gamma_complex_recip", "gamma_ratio", "gamma_recip", "log_qgamma", "log_qpoch",
    "log_qpoch_many", "qgamma", "qpoch_bilateral_index", "qpoch_descending", "qpoch_finite",
    "qpoch_finite_many", "qpoch_finite_negbase", "qpoch_infinite", "qpoch_infinite_many",
    "qpoch_multiset", "reciprocal_gamma_pair", "require_nonvanishing", "theta", "wrap_phase",
]
