# common/config.py
"""
Configuration management for the q-Askey verification toolkit
"""

import os
import json
from typing import Any, Callable, Optional
from dataclasses import dataclass, asdict
from dotenv import load_dotenv

from common.errors import ConfigError

load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() in ("1", "true", "yes")


def _env_number(name: str, default: str, kind: Callable[[str], Any]) -> Any:
    raw = os.getenv(name, default)
    try:
        return kind(raw)
    except ValueError as e:
        raise ConfigError(f"Invalid value for {name}: {raw!r}", {"variable": name, "value": raw}) from e


@dataclass
class NumericsConfig:
    """Series truncation and verification tolerances"""
    eps_term: float = 1e-16
    eps_verify: float = 1e-8
    max_terms: int = 10000
    compensated: bool = False
    max_degree: int = 12


@dataclass
class QuadratureConfig:
    """Real-line trapezoid settings"""
    initial_step: float = 0.25
    refine_limit: int = 6
    gate_tol: float = 1e-12
    safety_units: float = 2.0


@dataclass
class ReportConfig:
    """Report output settings"""
    default_output: str = "human"
    digits: int = 17
    history_db: str = ""


@dataclass
class SystemConfig:
    """System-wide configuration"""
    log_level: str = "INFO"
    log_file: str = "./logs/qaskey.log"
    max_concurrent_checks: int = 4


@dataclass
class QaskeyConfig:
    """Main configuration container"""
    numerics: NumericsConfig
    quadrature: QuadratureConfig
    report: ReportConfig
    system: SystemConfig

    @classmethod
    def load_from_env(cls) -> 'QaskeyConfig':
        """Load configuration from environment variables"""

        numerics = NumericsConfig(
            eps_term=_env_number("QASKEY_EPS_TERM", "1e-16", float),
            eps_verify=_env_number("QASKEY_EPS_VERIFY", "1e-8", float),
            max_terms=_env_number("QASKEY_MAX_TERMS", "10000", int),
            compensated=_env_bool("QASKEY_COMPENSATED", "false"),
            max_degree=_env_number("QASKEY_MAX_DEGREE", "12", int)
        )

        quadrature = QuadratureConfig(
            initial_step=_env_number("QASKEY_QUAD_STEP", "0.25", float),
            refine_limit=_env_number("QASKEY_QUAD_REFINE", "6", int),
            gate_tol=_env_number("QASKEY_QUAD_GATE", "1e-12", float),
            safety_units=_env_number("QASKEY_QUAD_SAFETY", "2.0", float)
        )

        report = ReportConfig(
            default_output=os.getenv("QASKEY_OUTPUT", "human"),
            digits=_env_number("QASKEY_DIGITS", "17", int),
            history_db=os.getenv("QASKEY_HISTORY_DB", "")
        )

        system = SystemConfig(
            log_level=os.getenv("LOG_LEVEL", "INFO"),
            log_file=os.getenv("LOG_FILE", "./logs/qaskey.log"),
            max_concurrent_checks=_env_number("QASKEY_MAX_CONCURRENT", "4", int)
        )

        return cls(numerics=numerics, quadrature=quadrature, report=report, system=system)

    def save_to_file(self, file_path: str) -> None:
        """Save configuration to JSON file"""
        directory = os.path.dirname(file_path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        with open(file_path, 'w', encoding='utf-8') as f:
            json.dump(asdict(self), f, indent=2)

    @classmethod
    def load_from_file(cls, file_path: str) -> 'QaskeyConfig':
        """Load configuration from JSON file"""
        with open(file_path, 'r', encoding='utf-8') as f:
            config_data = json.load(f)

        return cls(
            numerics=NumericsConfig(**config_data['numerics']),
            quadrature=QuadratureConfig(**config_data['quadrature']),
            report=ReportConfig(**config_data['report']),
            system=SystemConfig(**config_data['system'])
        )

    def validate(self) -> bool:
        """Validate configuration"""
        errors = []

        if self.numerics.eps_term <= 0:
            errors.append("eps_term must be positive")
        if self.numerics.eps_verify <= 0:
            errors.append("eps_verify must be positive")
        if self.numerics.max_terms < 16:
            errors.append("max_terms must be at least 16")
        if self.numerics.max_degree < 0:
            errors.append("max_degree must be nonnegative")

        if self.quadrature.initial_step <= 0:
            errors.append("quadrature initial_step must be positive")
        if self.quadrature.refine_limit < 1:
            errors.append("quadrature refine_limit must be at least 1")
        if self.quadrature.gate_tol <= 0:
            errors.append("quadrature gate_tol must be positive")
        if self.quadrature.safety_units < 0:
            errors.append("quadrature safety_units must be nonnegative")

        if self.report.default_output not in ("human", "json", "csv"):
            errors.append(f"Unknown output format: {self.report.default_output}")

        if self.system.max_concurrent_checks < 1:
            errors.append("max_concurrent_checks must be at least 1")

        if errors:
            raise ConfigError(f"Configuration validation failed: {'; '.join(errors)}", {"errors": errors})

        return True


# Global configuration instance
_config: Optional[QaskeyConfig] = None


def get_config() -> QaskeyConfig:
    """Get global configuration instance"""
    global _config
    if _config is None:
        _config = QaskeyConfig.load_from_env()
        _config.validate()
    return _config


def reload_config() -> QaskeyConfig:
    """Reload configuration from environment"""
    global _config
    _config = QaskeyConfig.load_from_env()
    _config.validate()
    return _config
