# verifier/core.py
"""
Verification runner - run configuration, check records, reports and the
concurrent check executor shared by every CLI command
"""

import asyncio
import math
import time
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import yaml

from common.config import get_config
from common.errors import ConfigError, ConstraintError, DivergenceError, QaskeyError
from common.logger import get_module_logger
from families.core import Family, FamilyTag
from qseries.core import QContext

__version__ = "0.1.0"

logger = get_module_logger("verifier")

COMMANDS = ("eval", "gram", "cont-gram", "qbeta", "beta", "mass", "suite", "jint", "tconst")
OUTPUTS = ("human", "json", "csv")

# Relative defects are measured against at least this magnitude
DEFECT_FLOOR = 1e-300


def parse_number(text: Any) -> complex:
    """'re,im' is complex, a bare number is real"""
    if isinstance(text, (int, float, complex, np.number)):
        return complex(text)
    text = str(text).strip()
    try:
        if "," in text:
            re_part, im_part = text.split(",")
            return complex(float(re_part), float(im_part))
        return complex(float(text), 0.0)
    except ValueError as e:
        raise ConfigError(f"Cannot parse number '{text}'", {"value": text}) from e


def parse_params(value: Any) -> Tuple[complex, ...]:
    """Parameter list from the CLI or a config file

    With ';' present every entry may be a 're,im' pair; otherwise commas
    separate real entries.
    """
    if value is None or value == "":
        return ()
    if isinstance(value, (list, tuple)):
        return tuple(parse_number(v) for v in value)
    if isinstance(value, (int, float, complex)):
        return (complex(value),)
    text = str(value).strip()
    if ";" in text:
        return tuple(parse_number(part) for part in text.split(";") if part.strip())
    return tuple(parse_number(part) for part in text.split(",") if part.strip())


def format_number(value: Any, digits: Optional[int] = None) -> Any:
    """Decimal strings with a fixed number of significant digits; complex as 're,im'"""
    digits = digits or get_config().report.digits
    if value is None:
        return None
    if isinstance(value, (bool, str)):
        return value
    if isinstance(value, np.ndarray):
        return [format_number(v, digits) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [format_number(v, digits) for v in value]
    if isinstance(value, dict):
        return {k: format_number(v, digits) for k, v in value.items()}
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        if value.imag == 0:
            return format(value.real, f".{digits}g")
        return f"{value.real:.{digits}g},{value.imag:.{digits}g}"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), f".{digits}g")


def relative_defect(computed: complex, reference: complex) -> float:
    return abs(computed - reference) / max(abs(reference), DEFECT_FLOOR)


_NUMERIC_FIELDS = {
    "q": float, "alpha": float, "tol": float, "n": int, "m": int, "max_degree": int, "seed": int,
}


@dataclass
class RunConfig:
    """Everything a command needs; validated before any computation"""
    command: str = "suite"
    family: str = "hermite"
    q: float = 0.5
    alpha: float = 1.0
    params: Tuple[complex, ...] = ()
    n: int = 0
    m: int = 0
    max_degree: int = 4
    tol: Optional[float] = None
    output: str = "human"
    seed: int = 42
    only: Tuple[str, ...] = ()
    timing: bool = False
    z: Optional[complex] = None
    x: Optional[complex] = None
    record: bool = False

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], base: Optional['RunConfig'] = None) -> 'RunConfig':
        """Overlay a mapping (config file or CLI options) onto base"""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}", {"keys": unknown})

        values = asdict(base) if base is not None else {}
        for key, value in data.items():
            if value is None:
                continue
            if key == "params":
                value = parse_params(value)
            elif key in ("z", "x"):
                value = parse_number(value)
            elif key == "only":
                value = tuple(value.split(",")) if isinstance(value, str) else tuple(value)
            elif key == "family":
                value = str(value)
            elif key in _NUMERIC_FIELDS:
                try:
                    value = _NUMERIC_FIELDS[key](value)
                except (TypeError, ValueError) as e:
                    raise ConfigError(f"Invalid value for {key}: {value!r}", {"key": key}) from e
            values[key] = value
        try:
            return cls(**values)
        except TypeError as e:
            raise ConfigError(f"Invalid configuration: {e}") from e

    @classmethod
    def from_yaml(cls, path: str, base: Optional['RunConfig'] = None) -> 'RunConfig':
        try:
            with open(path, 'r') as f:
                data = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"Cannot read config file {path}: {e}", {"path": path}) from e
        if not isinstance(data, dict):
            raise ConfigError("Config file must contain a mapping", {"path": path})
        return cls.from_mapping(data, base)

    @property
    def family_tag(self) -> FamilyTag:
        return FamilyTag.parse(self.family)

    def family_obj(self) -> Family:
        return Family.of(self.family_tag, *self.params)

    @property
    def tolerance(self) -> float:
        """Pass threshold; the configured eps_verify unless --tol was given"""
        return self.tol if self.tol is not None else get_config().numerics.eps_verify

    def context(self) -> QContext:
        return QContext.from_config(self.q)

    def validate(self) -> 'RunConfig':
        """Raise ConfigError listing every violation"""
        errors = []
        if self.command not in COMMANDS:
            errors.append(f"unknown command {self.command}")
        if self.output not in OUTPUTS:
            errors.append(f"output must be one of {', '.join(OUTPUTS)}")
        if not 0 < float(self.q) < 1:
            errors.append("q must lie in (0, 1)")
        if self.tol is not None and not self.tol > 0:
            errors.append("tol must be positive")
        if min(self.n, self.m, self.max_degree) < 0:
            errors.append("degrees must be nonnegative")
        if self.max_degree > get_config().numerics.max_degree:
            errors.append(f"max_degree above the configured limit {get_config().numerics.max_degree}")
        if self.z is not None and self.x is not None:
            errors.append("give either z or x, not both")
        if self.z == 0:
            errors.append("z must be nonzero")

        if self.command in ("eval", "gram", "cont-gram"):
            try:
                tag = self.family_tag
                if len(self.params) != tag.arity:
                    errors.append(f"{tag.value} takes {tag.arity} parameters, got {len(self.params)}")
            except QaskeyError as e:
                errors.append(str(e))
        if self.command in ("qbeta", "mass") and len(self.params) != 4:
            errors.append(f"{self.command} takes four parameters")
        if self.command == "beta" and len(self.params) not in (0, 4):
            errors.append("beta takes four parameters")
        if self.command in ("cont-gram", "qbeta", "jint") and not (isinstance(self.alpha, (int, float)) and self.alpha > 0):
            errors.append("alpha must be a positive real for continuous relations")
        if self.command in ("cont-gram", "qbeta") and any(p.imag != 0 for p in self.params):
            errors.append("continuous relations take real parameters")

        if errors:
            raise ConfigError("Invalid run configuration: " + "; ".join(errors), {"errors": errors})
        return self

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key in ("q", "alpha", "tol"):
            data[key] = format_number(data[key])
        data["params"] = [format_number(p) for p in self.params]
        data["z"] = format_number(self.z)
        data["x"] = format_number(self.x)
        data["only"] = list(self.only)
        data.pop("timing")
        data.pop("record")
        return data


@dataclass
class CheckRecord:
    """One verified quantity: computed against reference with its defect"""
    name: str
    inputs: Dict[str, Any]
    computed: Any
    reference: Any
    defect: float
    tol: float
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and not math.isnan(self.defect) and self.defect <= self.tol

    @classmethod
    def failed(cls, name: str, inputs: Dict[str, Any], tol: float, error: Exception) -> 'CheckRecord':
        return cls(name, inputs, None, None, math.inf, tol, f"{type(error).__name__}: {error}")

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "name": self.name,
            "inputs": format_number(self.inputs),
            "computed": format_number(self.computed),
            "reference": format_number(self.reference),
            "defect": format_number(self.defect),
            "tol": format_number(self.tol),
            "pass": self.passed,
        }
        if self.error:
            data["error"] = self.error
        return data


@dataclass
class Report:
    config: RunConfig
    checks: List[CheckRecord] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> Dict[str, Any]:
        defects = [c.defect for c in self.checks]
        return {
            "total": len(self.checks),
            "passed": sum(1 for c in self.checks if c.passed),
            "worst_defect": max(defects) if defects else 0.0,
            "wall_time": self.wall_time,
        }

    def to_dict(self, timing: bool = False) -> Dict[str, Any]:
        summary = self.summary()
        if not timing:
            summary.pop("wall_time")
        return {
            "meta": {"version": __version__, "seed": self.config.seed, "config": self.config.to_dict()},
            "checks": [c.to_dict() for c in self.checks],
            "summary": format_number(summary),
        }


CheckFn = Callable[[], List[CheckRecord]]


@dataclass(frozen=True)
class CheckGroup:
    """Named unit of work for the runner; returns its records in a fixed order"""
    name: str
    run: CheckFn

    def tightened(self, tol: float) -> 'CheckGroup':
        """Same checks with every record tolerance capped at tol"""
        def run() -> List[CheckRecord]:
            return [replace(r, tol=min(r.tol, tol)) for r in self.run()]

        return CheckGroup(self.name, run)


async def _run_group(group: CheckGroup, semaphore: asyncio.Semaphore,
                     record_constraints: bool = False) -> List[CheckRecord]:
    async with semaphore:
        logger.info(f"Running check group: {group.name}")
        start = time.perf_counter()
        try:
            records = await asyncio.to_thread(group.run)
        except (ConstraintError, DivergenceError) as e:
            if not record_constraints:
                raise
            logger.error(f"Check group {group.name} rejected its inputs: {e}")
            records = [CheckRecord.failed(group.name, {}, 0.0, e)]
        except (QaskeyError, ArithmeticError, np.linalg.LinAlgError) as e:
            logger.error(f"Check group {group.name} failed: {e}")
            records = [CheckRecord.failed(group.name, {}, 0.0, e)]
        logger.debug(f"{group.name} finished in {time.perf_counter() - start:.2f}s")
        return records


async def run_groups(groups: Sequence[CheckGroup], max_concurrent: Optional[int] = None,
                     record_constraints: bool = False) -> List[CheckRecord]:
    """Run groups concurrently; records keep registry order

    With record_constraints, constraint and divergence errors become failed
    records instead of aborting the run.
    """
    limit = max_concurrent or get_config().system.max_concurrent_checks
    semaphore = asyncio.Semaphore(limit)
    results = await asyncio.gather(*(_run_group(g, semaphore, record_constraints) for g in groups))
    return [record for records in results for record in records]


def execute(config: RunConfig, groups: Sequence[CheckGroup]) -> Report:
    """Run the groups and wrap the records into a report

    Single commands let constraint errors through for exit status 2; the
    suite records them as failed checks and keeps going.
    """
    start = time.perf_counter()
    records = asyncio.run(run_groups(groups, record_constraints=config.command == "suite"))
    wall_time = time.perf_counter() - start
    report = Report(config, records, wall_time)
    summary = report.summary()
    logger.info(f"{config.command}: {summary['passed']}/{summary['total']} checks passed in {wall_time:.2f}s")
    return report


__all__ = [
    "COMMANDS", "CheckGroup", "CheckRecord", "OUTPUTS", "Report", "RunConfig", "execute", "format_number",
    "parse_number", "parse_params", "relative_defect", "run_groups",
]
