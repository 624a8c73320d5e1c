# families/core.py
"""
The five q^{-1}-symmetric families (Askey-Wilson, dual Hahn, Al-Salam-Chihara,
big Hermite, Hermite), their terminating representations, the z <-> x
coordinate convention and the cross-maps to other normalizations
"""

import cmath
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from common.errors import ConstraintError, PoleError
from common.logger import get_module_logger
from qseries.core import (
    LogComplex, ParamMultiset, QContext, binom2, log_qpoch, log_qpoch_many,
)
from qseries.hyper import PhiSpec, phi_rs

logger = get_module_logger("qpolys")

# Below this |a| the big Hermite polynomial is expanded in powers of a
SMALL_BIG_HERMITE_PARAM = 1e-2


class FamilyTag(Enum):
    ASKEY_WILSON = "aw"
    DUAL_HAHN = "dual-hahn"
    AL_SALAM_CHIHARA = "asc"
    BIG_HERMITE = "big-hermite"
    HERMITE = "hermite"

    @property
    def arity(self) -> int:
        return _ARITY[self]

    @property
    def representations(self) -> Tuple[int, ...]:
        return (1, 2) if self in (FamilyTag.ASKEY_WILSON, FamilyTag.DUAL_HAHN) else (1,)

    @property
    def canonical_rep(self) -> int:
        return self.representations[-1]

    @classmethod
    def parse(cls, name: str) -> 'FamilyTag':
        key = name.strip().lower().replace("_", "-")
        if key in _ALIASES:
            return _ALIASES[key]
        raise ConstraintError(f"Unknown family: {name}", {"known": sorted(_ALIASES)})


_ARITY = {
    FamilyTag.ASKEY_WILSON: 4,
    FamilyTag.DUAL_HAHN: 3,
    FamilyTag.AL_SALAM_CHIHARA: 2,
    FamilyTag.BIG_HERMITE: 1,
    FamilyTag.HERMITE: 0,
}

_ALIASES = {
    "aw": FamilyTag.ASKEY_WILSON, "askey-wilson": FamilyTag.ASKEY_WILSON,
    "dh": FamilyTag.DUAL_HAHN, "dual-hahn": FamilyTag.DUAL_HAHN,
    "asc": FamilyTag.AL_SALAM_CHIHARA, "al-salam-chihara": FamilyTag.AL_SALAM_CHIHARA,
    "bh": FamilyTag.BIG_HERMITE, "big-hermite": FamilyTag.BIG_HERMITE,
    "h": FamilyTag.HERMITE, "hermite": FamilyTag.HERMITE,
}

# Each family is the zero-parameter limit of the next one up
_PARENT = {
    FamilyTag.DUAL_HAHN: FamilyTag.ASKEY_WILSON,
    FamilyTag.AL_SALAM_CHIHARA: FamilyTag.DUAL_HAHN,
    FamilyTag.BIG_HERMITE: FamilyTag.AL_SALAM_CHIHARA,
    FamilyTag.HERMITE: FamilyTag.BIG_HERMITE,
}


@dataclass(frozen=True)
class Family:
    """A family tag with its parameter multiset"""
    tag: FamilyTag
    params: ParamMultiset = ParamMultiset()

    def __post_init__(self):
        if not isinstance(self.params, ParamMultiset):
            object.__setattr__(self, 'params', ParamMultiset(tuple(self.params)))
        if len(self.params) != self.tag.arity:
            raise ConstraintError(
                f"{self.tag.value} takes {self.tag.arity} parameters, got {len(self.params)}",
                {"family": self.tag.value},
            )

    @classmethod
    def of(cls, tag: FamilyTag, *params: complex) -> 'Family':
        return cls(tag, ParamMultiset(tuple(params)))

    def with_params(self, params: Sequence[complex]) -> 'Family':
        return Family(self.tag, ParamMultiset(tuple(params)))

    def parent(self, h: complex) -> 'Family':
        """Next family up the scheme with h appended as its extra parameter"""
        if self.tag not in _PARENT:
            raise ConstraintError("Askey-Wilson has no parent family")
        return Family(_PARENT[self.tag], self.params.extended(h))


@dataclass(frozen=True)
class ZPoint:
    """Point in the z variable with x = (z - 1/z)/2"""
    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if z == 0:
            raise ConstraintError("z must be nonzero")
        object.__setattr__(self, 'z', z)

    @classmethod
    def from_x(cls, x: complex) -> 'ZPoint':
        x = complex(x)
        return cls(x + cmath.sqrt(x * x + 1))

    @property
    def x(self) -> complex:
        return (self.z - 1 / self.z) / 2

    def involuted(self) -> 'ZPoint':
        """z -> -1/z, which fixes x"""
        return ZPoint(-1 / self.z)


# ---------------------------------------------------------------------------
# Terminating representations (prefactor as LogComplex, series via phi_rs)
# ---------------------------------------------------------------------------

def _phi(numerator, denominator, z, ctx: QContext) -> complex:
    return phi_rs(PhiSpec.of(numerator, denominator, z), ctx).as_complex()


def _aw_rep1(params, n, z, ctx) -> LogComplex:
    a, b, c, d = params
    q = ctx.q
    C = binom2(n)
    pref = (LogComplex.from_power(q, -3 * C) * LogComplex.from_power(-a * a * b * c * d, n)
            * log_qpoch_many((-1 / (a * b), -1 / (a * c), -1 / (a * d)), ctx, n))
    phi = _phi(
        (q ** -n, q ** (n - 1) / (a * b * c * d), z / a, -1 / (a * z)),
        (-1 / (a * b), -1 / (a * c), -1 / (a * d)),
        q, ctx,
    )
    return pref * phi


def _aw_rep2(params, n, z, ctx) -> LogComplex:
    a, b, c, d = params
    q = ctx.q
    C = binom2(n)
    q1n = q ** (1 - n)
    pref = (LogComplex.from_power(q, -3 * C) * LogComplex.from_power(-a * b * c * d * z, n)
            * log_qpoch_many((-1 / (a * b), -1 / (c * z), -1 / (d * z)), ctx, n))
    phi = _phi(
        (q ** -n, z / a, z / b, -q1n * c * d),
        (-1 / (a * b), -q1n * c * z, -q1n * d * z),
        q, ctx,
    )
    return pref * phi


def _dh_rep1(params, n, z, ctx) -> LogComplex:
    a, b, c = params
    q = ctx.q
    q1n = q ** (1 - n)
    pref = (LogComplex.from_power(q, -binom2(n)) * LogComplex.from_power(-a, n)
            * log_qpoch_many((z / a, -1 / (a * z)), ctx, n))
    phi = _phi(
        (q ** -n, -q1n * a * b, -q1n * a * c),
        (-q1n * a * z, q1n * a / z),
        q, ctx,
    )
    return pref * phi


def _dh_rep2(params, n, z, ctx) -> LogComplex:
    a, b, c = params
    q = ctx.q
    pref = (LogComplex.from_power(q, -2 * binom2(n)) * LogComplex.from_power(-a * b * c, n)
            * log_qpoch_many((-1 / (a * b), -1 / (a * c)), ctx, n))
    phi = _phi(
        (q ** -n, z / a, -1 / (a * z)),
        (-1 / (a * b), -1 / (a * c)),
        -q ** n / (b * c), ctx,
    )
    return pref * phi


def _asc_rep(params, n, z, ctx) -> LogComplex:
    a, b = params
    q = ctx.q
    pref = (LogComplex.from_power(q, -binom2(n)) * LogComplex.from_power(-b, n)
            * log_qpoch(-1 / (a * b), ctx, n))
    phi = _phi((q ** -n, z / a, -1 / (a * z)), (-1 / (a * b),), q ** n * a / b, ctx)
    return pref * phi


def _big_hermite_rep(params, n, z, ctx) -> LogComplex:
    (a,) = params
    if abs(a) < SMALL_BIG_HERMITE_PARAM:
        return LogComplex.from_complex(_big_hermite_expanded(a, n, z, ctx))
    q = ctx.q
    phi = _phi((q ** -n, z / a, -1 / (a * z)), (), -q ** n * a * a, ctx)
    return LogComplex.from_power(-1 / a, n) * phi


def _big_hermite_expanded(a: complex, n: int, z: complex, ctx: QContext) -> complex:
    """Big Hermite polynomial as an explicit polynomial in a

    Each 3phi0 term is c_k prod_{j<k} (a - z q^j)(a + q^j/z); the a^0..a^{n-1}
    coefficients of their sum vanish, which removes the 1/a^n cancellation.
    """
    q = ctx.q
    total = np.zeros(2 * n + 1, dtype=complex)
    coeff = 1 + 0j
    poly = np.array([1 + 0j])
    qj = 1 + 0j
    for k in range(n + 1):
        total[:poly.size] += coeff * poly
        if k == n:
            break
        # c_{k+1}/c_k for c_k = (q^-n;q)_k/(q;q)_k q^{-2 binom(k,2)} (-q^n)^k
        coeff *= (1 - q ** -n * qj) / (1 - q * qj) * (-q ** n) * qj ** -2
        poly = P.polymul(poly, P.polymul([-z * qj, 1], [qj / z, 1]))
        qj *= q
    reduced = total[n:]
    return (-1) ** n * complex(P.polyval(a, reduced))


def _hermite_rep(params, n, z, ctx) -> LogComplex:
    phi = _phi((ctx.q ** -n,), (0,), -ctx.q / (z * z), ctx)
    return LogComplex.from_power(z, n) * phi


_REPS: Dict[Tuple[FamilyTag, int], Callable] = {
    (FamilyTag.ASKEY_WILSON, 1): _aw_rep1,
    (FamilyTag.ASKEY_WILSON, 2): _aw_rep2,
    (FamilyTag.DUAL_HAHN, 1): _dh_rep1,
    (FamilyTag.DUAL_HAHN, 2): _dh_rep2,
    (FamilyTag.AL_SALAM_CHIHARA, 1): _asc_rep,
    (FamilyTag.BIG_HERMITE, 1): _big_hermite_rep,
    (FamilyTag.HERMITE, 1): _hermite_rep,
}


def eval_poly_log(fam: Family, n: int, pt: ZPoint, ctx: QContext, rep: Optional[int] = None) -> LogComplex:
    """Polynomial value in log-scaled form; rep=None tries the canonical rep first"""
    if n < 0:
        raise ConstraintError("Degree must be nonnegative", {"n": n})
    if n == 0:
        return LogComplex.one()

    if rep is not None:
        if rep not in fam.tag.representations:
            raise ConstraintError(
                f"{fam.tag.value} has no representation {rep}",
                {"available": list(fam.tag.representations)},
            )
        return _REPS[(fam.tag, rep)](tuple(fam.params), n, pt.z, ctx)

    reps = sorted(fam.tag.representations, key=lambda r: r != fam.tag.canonical_rep)
    last_error: Optional[PoleError] = None
    for candidate in reps:
        try:
            return _REPS[(fam.tag, candidate)](tuple(fam.params), n, pt.z, ctx)
        except PoleError as e:
            logger.debug(f"{fam.tag.value} rep {candidate} hit a pole at z={pt.z}: {e}")
            last_error = e
    raise last_error


def eval_poly(fam: Family, n: int, pt: ZPoint, ctx: QContext, rep: Optional[int] = None) -> complex:
    """Degree-n polynomial of the family at pt"""
    return eval_poly_log(fam, n, pt, ctx, rep).to_complex()


def eval_via_limit_chain(fam: Family, n: int, pt: ZPoint, ctx: QContext, h: float) -> complex:
    """Evaluate the parent family with its extra parameter set to h"""
    if not 0 < h <= 1e-3:
        raise ConstraintError("h must lie in (0, 1e-3]", {"h": h})
    return eval_poly(fam.parent(h), n, pt, ctx)


# ---------------------------------------------------------------------------
# Other normalizations
# ---------------------------------------------------------------------------

def ismail_asc_polynomial(n: int, pt: ZPoint, a: complex, b: complex, ctx: QContext) -> complex:
    """Ismail's Q_n(x; a, b) through its 2phi1"""
    q = ctx.q
    z = pt.z
    pref = (LogComplex.from_power(a, n) * log_qpoch(z / a, ctx, n)
            / log_qpoch(q, ctx, n))
    phi = _phi((q ** -n, -1 / (b * z)), (q ** (1 - n) * a / z,), q * b / z, ctx)
    return (pref * phi).to_complex()


def crossmap_ismail_asc(n: int, pt: ZPoint, a: complex, b: complex, ctx: QContext) -> complex:
    """q^{-binom(n,2)} (-1)^n (q;q)_n Q_n(x; a, b)"""
    if n == 0:
        return 1 + 0j
    scale = LogComplex.from_power(ctx.q, -binom2(n)) * LogComplex.from_power(-1, n) * log_qpoch(ctx.q, ctx, n)
    return (scale * ismail_asc_polynomial(n, pt, a, b, ctx)).to_complex()


def izz_v_polynomial(n: int, pt: ZPoint, a: complex, b: complex, c: complex, ctx: QContext) -> complex:
    """V_n(x; a, b, c | q) in the Ismail-Zhang-Zhou normalization"""
    q = ctx.q
    z = pt.z
    pref = (LogComplex.from_power(a / q, n) * log_qpoch(-q * q / (a * c), ctx, n)
            / log_qpoch(-q * q / (b * c), ctx, n))
    phi = _phi(
        (q ** -n, q * z / a, -q / (a * z)),
        (-q * q / (a * b), -q * q / (a * c)),
        -q ** (n + 2) / (b * c), ctx,
    )
    return (pref * phi).to_complex()


def izz_p_polynomial(n: int, pt: ZPoint, a: complex, b: complex, c: complex, d: complex,
                     ctx: QContext) -> complex:
    """p_n(x, a) in the Ismail-Zhang-Zhou normalization"""
    q = ctx.q
    z = pt.z
    lower = (-q * q / (a * b), -q * q / (a * c), -q * q / (a * d))
    pref = LogComplex.from_power(a / q, n) * log_qpoch_many(lower, ctx, n)
    phi = _phi((q ** -n, q ** (n + 3) / (a * b * c * d), q * z / a, -q / (a * z)), lower, q, ctx)
    return (pref * phi).to_complex()


def crossmap_izz(n: int, pt: ZPoint, params: Sequence[complex], ctx: QContext, which: str) -> complex:
    """Rescale the V_n (three parameters) or p_n (four parameters) normalization to ours"""
    q = ctx.q
    C = binom2(n)
    which = which.upper()
    if which == "V3":
        a, b, c = (complex(p) for p in params)
        scale = (LogComplex.from_power(q, -2 * C) * LogComplex.from_power(-b * c, n)
                 * log_qpoch_many((-1 / (a * b), -1 / (b * c)), ctx, n))
        return (scale * izz_v_polynomial(n, pt, q * a, q * b, q * c, ctx)).to_complex()
    if which == "P4":
        a, b, c, d = (complex(p) for p in params)
        scale = LogComplex.from_power(q, -3 * C) * LogComplex.from_power(-a * b * c * d, n)
        return (scale * izz_p_polynomial(n, pt, q * a, q * b, q * c, q * d, ctx)).to_complex()
    raise ConstraintError(f"Unknown normalization {which}; expected V3 or P4")


def askey_wilson_classical(n: int, y: complex, A: complex, B: complex, C: complex, D: complex,
                           ctx: QContext) -> complex:
    """Classical Askey-Wilson p_n(y; A, B, C, D | q) with y = cos(theta)"""
    q = ctx.q
    y = complex(y)
    e = y + cmath.sqrt(y * y - 1)
    lower = (A * B, A * C, A * D)
    pref = LogComplex.from_power(A, -n) * log_qpoch_many(lower, ctx, n)
    phi = _phi((q ** -n, A * B * C * D * q ** (n - 1), A * e, A / e), lower, q, ctx)
    return (pref * phi).to_complex()


def reciprocal_param_identity(n: int, pt: ZPoint, params: Sequence[complex],
                              ctx: QContext) -> Tuple[complex, complex]:
    """Both sides of p_n(x; a,b,c,d) = q^{-3binom(n,2)} (iabcd)^n p_n^{AW}(ix; -i/a, ..., -i/d)

    The classical side is a polynomial in y = (e + 1/e)/2; with e = iz that
    is y = ix, not x.
    """
    a, b, c, d = (complex(p) for p in params)
    lhs = eval_poly(Family.of(FamilyTag.ASKEY_WILSON, a, b, c, d), n, pt, ctx)
    scale = LogComplex.from_power(ctx.q, -3 * binom2(n)) * LogComplex.from_power(1j * a * b * c * d, n)
    classical = askey_wilson_classical(n, 1j * pt.x, -1j / a, -1j / b, -1j / c, -1j / d, ctx)
    return lhs, (scale * classical).to_complex()


__all__ = [
    "Family", "FamilyTag", "ZPoint", "askey_wilson_classical", "crossmap_ismail_asc", "crossmap_izz",
    "eval_poly", "eval_poly_log", "eval_via_limit_chain", "ismail_asc_polynomial", "izz_p_polynomial",
    "izz_v_polynomial", "reciprocal_param_identity",
]
