# verifier/suite.py
"""
Acceptance battery - seeded property and oracle checks across every module.
Each entry of SUITE is an independent check group with its own random stream,
so results do not depend on how the runner schedules groups.
"""

import itertools
import math
from typing import Callable, Dict, List, Sequence

import numpy as np
from scipy import special

from common.errors import ConfigError
from families.core import Family, FamilyTag, ZPoint, eval_poly, eval_via_limit_chain
from orthogonality.continuous.core import (
    T_LIMIT, beta_integral_check, continuous_inner, discrete_to_continuous_check, hermite_symmetric_inner,
    j_integral_triangulation, qbeta_integral, ramanujan_fourier_pair, sin4_integral, t_constant_sequence,
)
from orthogonality.discrete.core import DiscreteOrthoSpec, admissible_degree, gram, total_mass
from qseries.core import QContext, binom2, qgamma, qpoch_finite
from qseries.hyper import dougall_5h5
from verifier.core import CheckGroup, CheckRecord, relative_defect

SUITE_QS = (0.3, 0.5, 0.7)
AW_SUITE_PARAMS = (0.2, 0.3, 0.4, 0.45)
SUITE_MAX_DEGREE = 5
LIMIT_CHAIN_H = 1e-6
T_SEQUENCE_QS = (0.9, 0.99, 0.999)
QGAMMA_Q = 0.999


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream])


def _scaled_defect(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def check_representations(seed: int) -> List[CheckRecord]:
    """Both Askey-Wilson and both dual-Hahn representations agree"""
    rng = _rng(seed, 1)
    worst = {FamilyTag.ASKEY_WILSON: 0.0, FamilyTag.DUAL_HAHN: 0.0}
    for _ in range(100):
        q = rng.uniform(0.2, 0.8)
        params = rng.uniform(0.01, 0.6, 4)
        pt = ZPoint(rng.uniform(0.5, 2.0))
        ctx = QContext.from_config(q)
        for tag in worst:
            fam = Family.of(tag, *params[:tag.arity])
            for n in range(1, 7):
                defect = _scaled_defect(eval_poly(fam, n, pt, ctx, rep=1), eval_poly(fam, n, pt, ctx, rep=2))
                worst[tag] = max(worst[tag], defect)
    return [
        CheckRecord(f"reps.{tag.value}", {"samples": 100, "max_n": 6}, None, None, defect, 1e-10)
        for tag, defect in worst.items()
    ]


def check_parameter_symmetry(seed: int) -> List[CheckRecord]:
    """Askey-Wilson values are invariant under all 24 parameter orders"""
    rng = _rng(seed, 2)
    worst = 0.0
    for _ in range(20):
        q = rng.uniform(0.2, 0.8)
        params = tuple(rng.uniform(0.01, 0.6, 4))
        pt = ZPoint(rng.uniform(0.5, 2.0))
        ctx = QContext.from_config(q)
        for n in range(1, 6):
            base = eval_poly(Family.of(FamilyTag.ASKEY_WILSON, *params), n, pt, ctx)
            for perm in itertools.permutations(params):
                value = eval_poly(Family.of(FamilyTag.ASKEY_WILSON, *perm), n, pt, ctx)
                worst = max(worst, _scaled_defect(value, base))
    return [CheckRecord("symmetry.aw", {"samples": 20, "max_n": 5, "permutations": 24}, None, None, worst, 1e-10)]


def _suite_family(tag: FamilyTag, rng: np.random.Generator) -> Family:
    if tag is FamilyTag.ASKEY_WILSON:
        return Family.of(tag, *AW_SUITE_PARAMS)
    return Family.of(tag, *rng.uniform(0.05, 0.45, tag.arity))


def check_discrete_orthogonality(seed: int) -> List[CheckRecord]:
    """Gram matrices on the lattice q^k, k in Z, against the closed norms"""
    rng = _rng(seed, 3)
    records = []
    for q in SUITE_QS:
        ctx = QContext.from_config(q)
        for tag in FamilyTag:
            fam = _suite_family(tag, rng)
            limit = admissible_degree(fam, ctx)
            degree = SUITE_MAX_DEGREE if limit is None else min(SUITE_MAX_DEGREE, limit)
            report = gram(DiscreteOrthoSpec(fam, 1.0, degree, ctx))
            inputs = {"family": tag.value, "q": q, "params": list(fam.params), "max_degree": degree}
            error = "; ".join(f"{k}: {v}" for k, v in sorted(report.failures.items())) or None
            records.append(CheckRecord(
                f"discrete.{tag.value}.q{q}", inputs, np.diag(report.computed), report.closed_form_diag,
                max(report.worst_offdiag, report.worst_diag), 1e-8, error,
            ))
    return records


def check_total_mass(seed: int) -> List[CheckRecord]:
    rng = _rng(seed, 4)
    worst = 0.0
    for _ in range(20):
        q = rng.uniform(0.2, 0.8)
        params = rng.uniform(0.05, 0.6, 4)
        direct, closed = total_mass(params, 1.0, QContext.from_config(q))
        worst = max(worst, relative_defect(direct, closed))
    return [CheckRecord("mass.aw", {"samples": 20, "alpha": 1.0}, None, None, worst, 1e-10)]


def _hermite_norm(n: int, ctx: QContext) -> float:
    q = ctx.q.real
    return (q ** -binom2(n) * qpoch_finite(q, ctx, n).real * q ** (-n - 0.125)
            * math.sqrt(2 * math.pi / -math.log(q)))


def check_hermite_continuous(seed: int) -> List[CheckRecord]:
    """Real-line Hermite orthogonality at q = 1/2, alpha = 1, in both weight forms"""
    ctx = QContext.from_config(0.5)
    fam = Family(FamilyTag.HERMITE)
    norms = [_hermite_norm(n, ctx) for n in range(5)]
    worst_diag = worst_off = worst_sym = 0.0
    for m in range(5):
        for n in range(m, 5):
            value = continuous_inner(fam, 1.0, m, n, ctx)
            if m == n:
                worst_diag = max(worst_diag, relative_defect(value, norms[n]))
            else:
                worst_off = max(worst_off, abs(value) / math.sqrt(norms[m] * norms[n]))
            if n <= 2:
                sym = hermite_symmetric_inner(m, n, ctx)
                reference = norms[n] if m == n else 0.0
                worst_sym = max(worst_sym, abs(sym - reference) / math.sqrt(norms[m] * norms[n]))
    inputs = {"q": 0.5, "alpha": 1.0, "max_n": 4}
    return [
        CheckRecord("hermite.diagonal", inputs, None, norms, worst_diag, 1e-8),
        CheckRecord("hermite.offdiagonal", inputs, None, 0.0, worst_off, 1e-8),
        CheckRecord("hermite.symmetric", {**inputs, "max_n": 2}, None, None, worst_sym, 1e-8),
    ]


def check_j_integral(seed: int) -> List[CheckRecord]:
    records = []
    for q in (0.3, 0.5):
        for alpha in (1.0, 2.0):
            report = j_integral_triangulation(alpha, QContext.from_config(q))
            records.append(CheckRecord(
                f"jint.q{q}.alpha{alpha:g}", {"q": q, "alpha": alpha},
                [report.unit_interval, report.real_line_scaled], report.closed_form, report.worst_defect, 1e-9,
            ))
    return records


def check_qbeta(seed: int) -> List[CheckRecord]:
    rng = _rng(seed, 7)
    samples = [(rng.uniform(0.3, 0.7), tuple(rng.uniform(0.05, 0.6, 4))) for _ in range(10)]
    records = []
    for alpha in (1.0, 1.5):
        worst = 0.0
        for q, params in samples:
            quadrature, closed = qbeta_integral(alpha, params, QContext.from_config(q))
            worst = max(worst, relative_defect(quadrature, closed))
        records.append(CheckRecord(f"qbeta.alpha{alpha:g}", {"samples": 10, "alpha": alpha}, None, None, worst, 1e-8))
    return records


def check_correspondence(seed: int) -> List[CheckRecord]:
    """Real-line integral against the unit-interval lattice integral for every family"""
    rng = _rng(seed, 8)
    ctx = QContext.from_config(0.5)
    records = []
    for tag in FamilyTag:
        fam = Family.of(tag, *rng.uniform(0.05, 0.3, tag.arity))
        worst = 0.0
        for m in range(4):
            for n in range(m, 4):
                worst = max(worst, discrete_to_continuous_check(fam, 1.0, m, n, ctx).defect)
        records.append(CheckRecord(
            f"correspondence.{tag.value}", {"q": 0.5, "alpha": 1.0, "params": list(fam.params), "max_n": 3},
            None, None, worst, 1e-7,
        ))
    return records


def check_beta_integral(seed: int) -> List[CheckRecord]:
    params = (0.1, 0.2, 0.3, 0.4)
    report = beta_integral_check(*params)
    defects = report.defects()
    zeros = dougall_5h5(0.0, 0.0, 0.0, 0.0)
    sin4 = sin4_integral()
    sin4_reference = math.pi ** 3 / 4
    return [
        CheckRecord("beta.dougall", {"params": params}, report.dougall, report.closed_form, defects["dougall"], 1e-9),
        CheckRecord("beta.quadrature", {"params": params}, report.quadrature, report.closed_form,
                    defects["quadrature"], 1e-4),
        CheckRecord("beta.dougall.zeros", {"params": (0.0,) * 4}, zeros.direct, -1 / (2 * math.pi ** 2),
                    relative_defect(zeros.direct, -1 / (2 * math.pi ** 2)), 1e-9),
        CheckRecord("beta.sin4", {}, sin4, complex(0.0, sin4_reference), abs(sin4.imag - sin4_reference), 1e-6),
    ]


def check_fourier_pair(seed: int) -> List[CheckRecord]:
    records = []
    for a, t in ((0.5, 0.0), (1.0, math.pi / 2), (1.0, 3.5)):
        quadrature, closed = ramanujan_fourier_pair(a, t)
        records.append(CheckRecord(f"fourier.a{a:g}.t{t:.4g}", {"a": a, "t": t}, quadrature, closed,
                                   abs(quadrature - closed), 1e-6))
    return records


def check_t_constant(seed: int) -> List[CheckRecord]:
    values = t_constant_sequence(T_SEQUENCE_QS)
    return [CheckRecord("tconst", {"q": list(T_SEQUENCE_QS)}, values, T_LIMIT, abs(values[-1] - T_LIMIT), 5e-3)]


def check_qgamma_limit(seed: int) -> List[CheckRecord]:
    ctx = QContext.from_config(QGAMMA_Q)
    records = []
    for x in (0.5, 1.5, 2.5):
        value = qgamma(x, ctx)
        reference = float(special.gamma(x))
        records.append(CheckRecord(f"qgamma.x{x:g}", {"q": QGAMMA_Q, "x": x}, value, reference,
                                   abs(value - reference), 5e-3))
    return records


def check_limit_chain(seed: int) -> List[CheckRecord]:
    """Each family with a tiny extra parameter reproduces its sub-family"""
    rng = _rng(seed, 13)
    ctx = QContext.from_config(0.5)
    records = []
    for tag in (FamilyTag.DUAL_HAHN, FamilyTag.AL_SALAM_CHIHARA, FamilyTag.BIG_HERMITE, FamilyTag.HERMITE):
        fam = Family.of(tag, *rng.uniform(0.05, 0.5, tag.arity))
        pt = ZPoint(rng.uniform(0.5, 2.0))
        worst = 0.0
        for n in range(1, 5):
            parent = eval_via_limit_chain(fam, n, pt, ctx, LIMIT_CHAIN_H)
            child = eval_poly(fam, n, pt, ctx)
            worst = max(worst, abs(parent - child) / max(abs(child), 1.0))
        records.append(CheckRecord(f"limits.{tag.value}", {"h": LIMIT_CHAIN_H, "z": pt.z.real, "max_n": 4},
                                   None, None, worst, 1e-4))
    return records


SUITE: Dict[str, Callable[[int], List[CheckRecord]]] = {
    "reps": check_representations,
    "symmetry": check_parameter_symmetry,
    "discrete": check_discrete_orthogonality,
    "mass": check_total_mass,
    "hermite": check_hermite_continuous,
    "jint": check_j_integral,
    "qbeta": check_qbeta,
    "correspondence": check_correspondence,
    "beta": check_beta_integral,
    "fourier": check_fourier_pair,
    "tconst": check_t_constant,
    "qgamma": check_qgamma_limit,
    "limits": check_limit_chain,
}


def suite_groups(seed: int, only: Sequence[str] = ()) -> List[CheckGroup]:
    """Check groups in registry order, optionally restricted to the named ones"""
    unknown = sorted(set(only) - set(SUITE))
    if unknown:
        raise ConfigError(f"Unknown suite checks: {', '.join(unknown)}", {"known": list(SUITE)})
    selected = [name for name in SUITE if not only or name in only]
    return [CheckGroup(name, (lambda fn=SUITE[name]: fn(seed))) for name in selected]


__all__ = ["SUITE", "suite_groups"]
