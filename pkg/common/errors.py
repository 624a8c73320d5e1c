# common/errors.py
"""
Error types shared by the series, polynomial and verification layers
"""

from typing import Any, Dict, Optional


class QaskeyError(ValueError):
    """Base error; carries structured details for reports and logs"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details: Dict[str, Any] = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": str(self), **self.details}


class PoleError(QaskeyError):
    """A denominator vanished (Pochhammer factor, lattice point, infinite product, q-gamma)"""


class DivergenceError(QaskeyError):
    """Series or integral outside its convergence region"""


class ConstraintError(QaskeyError):
    """Input violates a stated parameter constraint"""


class ConvergenceError(QaskeyError):
    """Numerical procedure did not reach its acceptance gate"""


class ConfigError(QaskeyError):
    """Invalid run configuration"""
