# families/__init__.py
"""q^{-1}-symmetric polynomial families"""

from families.core import (
    Family, FamilyTag, ZPoint, crossmap_ismail_asc, crossmap_izz, eval_poly, eval_poly_log,
    eval_via_limit_chain, reciprocal_param_identity,
)

__all__ = [
    "Family", "FamilyTag", "ZPoint", "crossmap_ismail_asc", "crossmap_izz", "eval_poly",
    "eval_poly_log", "eval_via_limit_chain", "reciprocal_param_identity",
]
