# verifier/__init__.py
"""Verification harness behind the command-line interface"""

from verifier.core import CheckRecord, Report, RunConfig, __version__

__all__ = ["CheckRecord", "Report", "RunConfig", "__version__"]
