"""Ground-truth enumeration and Monte-Carlo checks on truncated trees."""

from induced_forest.oracle.checks import CHECKS, CheckResult, OracleParams, run_check
from induced_forest.oracle.enumeration import (
    BallMode,
    EnumerationSpec,
    exact_pair,
    exact_single,
    mc_pair,
)

__all__ = [
    "CHECKS",
    "BallMode",
    "CheckResult",
    "EnumerationSpec",
    "OracleParams",
    "exact_pair",
    "exact_single",
    "mc_pair",
    "run_check",
]
