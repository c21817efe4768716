"""Comparisons between the step recurrences and the ODE they approximate."""

from __future__ import annotations

import math
from dataclasses import dataclass

from induced_forest.analysis.ode_system import integrate
from induced_forest.analysis.recurrence import iterate
from induced_forest.analysis.state import FIELDS, TrajectoryMode
from induced_forest.core.errors import InvalidArgumentError
from induced_forest.core.settings import OdeOptions


@dataclass(frozen=True)
class Deviation:
    """Largest absolute deviation per coordinate over a shared grid."""
    eps: float
    steps: int
    per_coordinate: dict[str, float]

    @property
    def sup(self) -> float:
        """Largest deviation over all fields."""
        return max(self.per_coordinate.values())


def _steps_for(eps: float, k0: float) -> int:
    if eps <= 0 or k0 <= 0:
        raise InvalidArgumentError(f"eps and k0 must be positive, got eps={eps}, k0={k0}")
    return max(1, math.ceil(k0 / eps - 1e-12))


def ode_vs_recurrence(
    r: int,
    p0: float,
    eps: float,
    k0: float,
    *,
    mode: TrajectoryMode = TrajectoryMode.LINEARIZED,
    options: OdeOptions | None = None,
) -> Deviation:
    """Compare the recurrence run with p = eps against the ODE at x = eps * i."""
    steps = _steps_for(eps, k0)
    traj = iterate(r, p0, eps, steps, mode)
    sol = integrate(r, p0, options, x_end=eps * steps)
    worst = dict.fromkeys(FIELDS, 0.0)
    for i, state in enumerate(traj.states):
        reference = sol.state_at(min(eps * i, sol.x_stop))
        for name in FIELDS:
            gap = abs(getattr(state, name) - getattr(reference, name))
            worst[name] = max(worst[name], gap)
    return Deviation(eps=eps, steps=steps, per_coordinate=worst)


def riemann_gap(
    r: int, p0: float, eps: float, k0: float, *, options: OdeOptions | None = None
) -> float:
    """Integral of b over [0, k0] minus the left Riemann sum of eps * b_i from exact steps."""
    steps = _steps_for(eps, k0)
    traj = iterate(r, p0, eps, steps, TrajectoryMode.EXACT)
    riemann = math.fsum(eps * state.b for state in traj.states[:-1])
    sol = integrate(r, p0, options, x_end=eps * steps)
    return sol.integral_at(sol.x_stop) - riemann
