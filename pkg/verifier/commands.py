# verifier/commands.py
"""
Command implementations: each turns a validated RunConfig into check groups
and runs them into a Report
"""

import math
from typing import Callable, Dict, List

from families.core import ZPoint, eval_poly
from orthogonality.continuous.core import (
    T_LIMIT, beta_integral_check, continuous_inner, continuous_norm, j_integral_triangulation, qbeta_integral,
    t_constant_sequence,
)
from orthogonality.discrete.core import DiscreteOrthoSpec, gram, total_mass
from verifier.core import CheckGroup, CheckRecord, Report, RunConfig, execute, relative_defect
from verifier.suite import T_SEQUENCE_QS, suite_groups

BETA_QUADRATURE_TOL = 1e-4


def _point(cfg: RunConfig) -> ZPoint:
    if cfg.x is not None:
        return ZPoint.from_x(cfg.x)
    return ZPoint(cfg.z if cfg.z is not None else 1.0)


def cmd_eval(cfg: RunConfig) -> Report:
    """Polynomial value; families with two representations report their agreement"""
    fam, ctx, pt = cfg.family_obj(), cfg.context(), _point(cfg)

    def run() -> List[CheckRecord]:
        inputs = {"family": fam.tag.value, "n": cfg.n, "z": pt.z, "x": pt.x, "params": list(fam.params)}
        reps = fam.tag.representations
        values = [eval_poly(fam, cfg.n, pt, ctx, rep=r) for r in reps]
        if len(values) == 1:
            return [CheckRecord(f"eval.{fam.tag.value}", inputs, values[0], values[0], 0.0, cfg.tolerance)]
        defect = abs(values[0] - values[1]) / max(abs(values[0]), abs(values[1]), 1e-300)
        return [CheckRecord(f"eval.{fam.tag.value}", inputs, values[-1], values[0], defect, cfg.tolerance)]

    return execute(cfg, [CheckGroup("eval", run)])


def cmd_gram(cfg: RunConfig) -> Report:
    spec = DiscreteOrthoSpec(cfg.family_obj(), cfg.alpha, cfg.max_degree, cfg.context())

    def run() -> List[CheckRecord]:
        report = gram(spec)
        records = []
        for m in range(spec.max_degree + 1):
            for n in range(m, spec.max_degree + 1):
                reference = report.closed_form_diag[n] if m == n else 0.0
                records.append(CheckRecord(
                    f"gram[{m},{n}]", {"family": spec.fam.tag.value, "m": m, "n": n},
                    report.computed[m, n], reference, float(report.defect[m, n]), cfg.tolerance,
                    report.failures.get((m, n)),
                ))
        return records

    return execute(cfg, [CheckGroup("gram", run)])


def cmd_cont_gram(cfg: RunConfig) -> Report:
    fam, ctx = cfg.family_obj(), cfg.context()
    alpha = float(cfg.alpha)
    norms = [continuous_norm(fam, alpha, n, ctx) for n in range(cfg.max_degree + 1)]

    def entry(m: int, n: int) -> Callable[[], List[CheckRecord]]:
        def run() -> List[CheckRecord]:
            value = continuous_inner(fam, alpha, m, n, ctx)
            if m == n:
                defect, reference = relative_defect(value, norms[n]), norms[n]
            else:
                defect, reference = abs(value) / math.sqrt(abs(norms[m]) * abs(norms[n])), 0.0
            return [CheckRecord(f"cont-gram[{m},{n}]", {"family": fam.tag.value, "m": m, "n": n, "alpha": alpha},
                                value, reference, defect, cfg.tolerance)]
        return run

    groups = [
        CheckGroup(f"cont-gram[{m},{n}]", entry(m, n))
        for m in range(cfg.max_degree + 1) for n in range(m, cfg.max_degree + 1)
    ]
    return execute(cfg, groups)


def cmd_qbeta(cfg: RunConfig) -> Report:
    params = tuple(p.real for p in cfg.params)

    def run() -> List[CheckRecord]:
        quadrature, closed = qbeta_integral(float(cfg.alpha), params, cfg.context())
        return [CheckRecord("qbeta", {"alpha": cfg.alpha, "params": params, "q": cfg.q},
                            quadrature, closed, relative_defect(quadrature, closed), cfg.tolerance)]

    return execute(cfg, [CheckGroup("qbeta", run)])


def cmd_beta(cfg: RunConfig) -> Report:
    params = tuple(p.real for p in cfg.params) or (0.0, 0.0, 0.0, 0.0)

    def run() -> List[CheckRecord]:
        report = beta_integral_check(*params)
        defects = report.defects()
        return [
            CheckRecord("beta.dougall", {"params": params}, report.dougall, report.closed_form,
                        defects["dougall"], cfg.tolerance),
            CheckRecord("beta.quadrature", {"params": params}, report.quadrature, report.closed_form,
                        defects["quadrature"], max(cfg.tolerance, BETA_QUADRATURE_TOL)),
        ]

    return execute(cfg, [CheckGroup("beta", run)])


def cmd_mass(cfg: RunConfig) -> Report:
    def run() -> List[CheckRecord]:
        direct, closed = total_mass(cfg.params, cfg.alpha, cfg.context())
        return [CheckRecord("mass", {"params": list(cfg.params), "alpha": cfg.alpha, "q": cfg.q},
                            direct, closed, relative_defect(direct, closed), cfg.tolerance)]

    return execute(cfg, [CheckGroup("mass", run)])


def cmd_jint(cfg: RunConfig) -> Report:
    def run() -> List[CheckRecord]:
        report = j_integral_triangulation(float(cfg.alpha), cfg.context())
        return [CheckRecord("jint", {"alpha": cfg.alpha, "q": cfg.q},
                            [report.unit_interval, report.real_line_scaled], report.closed_form,
                            report.worst_defect, cfg.tolerance)]

    return execute(cfg, [CheckGroup("jint", run)])


def cmd_tconst(cfg: RunConfig) -> Report:
    qs = tuple(p.real for p in cfg.params) or T_SEQUENCE_QS

    def run() -> List[CheckRecord]:
        values = t_constant_sequence(qs)
        return [CheckRecord("tconst", {"q": list(qs)}, values, T_LIMIT, abs(values[-1] - T_LIMIT), cfg.tolerance)]

    return execute(cfg, [CheckGroup("tconst", run)])


def cmd_suite(cfg: RunConfig) -> Report:
    """Full acceptance battery; each check carries its own tolerance, capped by --tol when given"""
    groups = suite_groups(cfg.seed, cfg.only)
    if cfg.tol is not None:
        groups = [g.tightened(cfg.tol) for g in groups]
    return execute(cfg, groups)


COMMAND_TABLE: Dict[str, Callable[[RunConfig], Report]] = {
    "eval": cmd_eval,
    "gram": cmd_gram,
    "cont-gram": cmd_cont_gram,
    "qbeta": cmd_qbeta,
    "beta": cmd_beta,
    "mass": cmd_mass,
    "jint": cmd_jint,
    "tconst": cmd_tconst,
    "suite": cmd_suite,
}


def run_command(cfg: RunConfig) -> Report:
    return COMMAND_TABLE[cfg.validate().command](cfg)


__all__ = [
    "COMMAND_TABLE", "cmd_beta", "cmd_cont_gram", "cmd_eval", "cmd_gram", "cmd_jint", "cmd_mass",
    "cmd_qbeta", "cmd_suite", "cmd_tconst", "run_command",
]
