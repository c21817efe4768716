"""Recurrences, their continuum limit and the resulting bounds."""

from induced_forest.analysis.bounds import BoundReport, optimize_p0, table, xi_of_p0
from induced_forest.analysis.ode_system import OdeSolution, derivative, integrate
from induced_forest.analysis.recurrence import (
    expected_pbar_fraction,
    iterate,
    step_exact,
    step_linearized,
)
from induced_forest.analysis.state import KineticState, Trajectory, TrajectoryMode, initial_state

__all__ = [
    "BoundReport",
    "KineticState",
    "OdeSolution",
    "Trajectory",
    "TrajectoryMode",
    "derivative",
    "expected_pbar_fraction",
    "initial_state",
    "integrate",
    "iterate",
    "optimize_p0",
    "step_exact",
    "step_linearized",
    "table",
    "xi_of_p0",
]
