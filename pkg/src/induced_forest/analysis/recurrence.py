"""Exact and linearized step-by-step evolution of the kinetic state."""

from __future__ import annotations

import logging
from collections.abc import Callable

import numpy as np

from induced_forest.analysis.state import (
    KineticState,
    Trajectory,
    TrajectoryMode,
    check_degree,
    initial_state,
)
from induced_forest.core.errors import DegenerateStateError, InvalidArgumentError

logger = logging.getLogger(__name__)

Step = Callable[[KineticState, int, float], KineticState]


def _check_step_args(state: KineticState, r: int, p: float) -> None:
    check_degree(r)
    if not 0.0 <= p < 1.0:
        raise InvalidArgumentError(f"p must lie in [0, 1), got {p}")
    if state.w <= 0.0 or state.b <= 0.0:
        raise DegenerateStateError(f"w and b must be positive, got w={state.w}, b={state.b}")


def step_exact(state: KineticState, r: int, p: float) -> KineticState:
    """One exact step of the process on the r-regular tree."""
    _check_step_args(state, r, p)
    w, b, q, s, t = state
    stay_white = 1 - p * s / w
    stay_blue = 1 - r * p * t / ((r - 1) * b)
    return KineticState(
        w=w * stay_white**r,
        b=b * (1 - p) * stay_blue ** (r - 1) + r * p * s * stay_white ** (r - 1),
        q=q * stay_white ** (2 * r - 2),
        s=(
            s * (1 - p) * stay_white ** (r - 1) * stay_blue ** (r - 2)
            + (r - 1) * p * q * s / w * stay_white ** (2 * r - 3)
        ),
        t=(
            t * (1 - p) ** 2 * stay_blue ** (2 * r - 4)
            + 2 * s * (1 - p) * stay_blue ** (r - 2) * (r - 1) * p * s / w * stay_white ** (r - 2)
            + q * (r - 1) ** 2 * p**2 * s**2 / w**2 * stay_white ** (2 * r - 4)
        ),
    )


def step_linearized(state: KineticState, r: int, p: float) -> KineticState:
    """One step of the first-order approximation of ``step_exact``."""
    _check_step_args(state, r, p)
    w, b, q, s, t = state
    return KineticState(
        w=w - p * r * s,
        b=b + p * (-b - r * t + r * s),
        q=q - p * (2 * r - 2) * q * s / w,
        s=s
        + p * (-s + (r - 1) * q * s / w - (r - 1) * s**2 / w - r * (r - 2) * s * t / ((r - 1) * b)),
        t=t + p * (-2 * t + 2 * (r - 1) * s**2 / w - 2 * r * (r - 2) * t**2 / ((r - 1) * b)),
    )


_STEPS: dict[TrajectoryMode, Step] = {
    TrajectoryMode.EXACT: step_exact,
    TrajectoryMode.LINEARIZED: step_linearized,
}


def iterate(r: int, p0: float, p: float, N: int, mode: TrajectoryMode) -> Trajectory:
    """States 0..N from ``initial_state(r, p0)``."""
    if N < 0:
        raise InvalidArgumentError(f"N must be non-negative, got {N}")
    step = _STEPS.get(TrajectoryMode(mode))
    if step is None:
        raise InvalidArgumentError(f"iterate supports exact and linearized modes, got {mode}")
    state = initial_state(r, p0)
    points = [(0.0, state)]
    for i in range(1, N + 1):
        state = step(state, r, p)
        points.append((float(i), state))
    logger.debug("Iterated %d %s steps for r=%d, p0=%g, p=%g", N, mode, r, p0, p)
    return Trajectory(mode=TrajectoryMode(mode), points=tuple(points))


def expected_pbar_fraction(traj: Trajectory, r: int, p0: float, p: float) -> float:
    """Lower bound on E|P-bar|/n after the trajectory's last step."""
    if traj.mode is not TrajectoryMode.EXACT:
        raise InvalidArgumentError("expected_pbar_fraction needs an exact-mode trajectory")
    blue = traj.column("b")[:-1]
    return p0 * (1 - p0) ** r + float(np.sum(p * (1 - p) ** r * blue))
