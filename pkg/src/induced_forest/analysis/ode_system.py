"""Continuum limit of the recurrences: derivative, adaptive integration and limits.

The solver works on (log w, log b, log q, log s, log t, I) where I is the
running integral of b. Positive states stay positive in these coordinates
and the exponentially decaying tail keeps a bounded relative error.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.integrate import solve_ivp

from induced_forest.analysis.state import (
    KineticState,
    Trajectory,
    TrajectoryMode,
    check_degree,
    initial_state,
    white_ratio,
)
from induced_forest.core.errors import (
    DegenerateStateError,
    HorizonExceededError,
    IntegrationError,
    InvalidArgumentError,
)
from induced_forest.core.settings import OdeOptions

logger = logging.getLogger(__name__)


def derivative(state: KineticState, r: int) -> KineticState:
    """Right-hand side of the kinetic ODE at ``state``."""
    w, b, q, s, t = state
    if w <= 0.0 or b <= 0.0:
        raise DegenerateStateError(f"w and b must be positive, got w={w}, b={b}")
    return KineticState(
        w=-r * s,
        b=-b - r * t + r * s,
        q=-(2 * r - 2) * q * s / w,
        s=-s + (r - 1) * q * s / w - (r - 1) * s**2 / w - r * (r - 2) * s * t / ((r - 1) * b),
        t=-2 * t + 2 * (r - 1) * s**2 / w - 2 * r * (r - 2) * t**2 / ((r - 1) * b),
    )


def _log_rates(r: int) -> Callable[[float, np.ndarray], np.ndarray]:
    blue_coupling = r * (r - 2) / (r - 1)

    def rates(_x: float, y: np.ndarray) -> np.ndarray:
        lw, lb, lq, ls, lt = (float(v) for v in y[:5])
        s_over_w = math.exp(ls - lw)
        t_over_b = math.exp(lt - lb)
        return np.array(
            [
                -r * s_over_w,
                -1.0 - r * t_over_b + r * math.exp(ls - lb),
                -(2 * r - 2) * s_over_w,
                -1.0 + (r - 1) * math.exp(lq - lw) - (r - 1) * s_over_w - blue_coupling * t_over_b,
                -2.0 + 2 * (r - 1) * math.exp(2 * ls - lw - lt) - 2 * blue_coupling * t_over_b,
                math.exp(lb),
            ]
        )

    return rates


@dataclass(frozen=True, eq=False)
class OdeSolution:
    """Integrated trajectory together with the limits the bound needs."""
    r: int
    p0: float
    xs: np.ndarray
    states: np.ndarray
    integrals: np.ndarray
    b_integral: float
    w_limit: float
    ratio_limit: float
    x_stop: float
    options: OdeOptions
    tail_certified: bool = True
    dense: Callable[[float], np.ndarray] | None = field(default=None, repr=False)

    @property
    def grid(self) -> list[tuple[float, KineticState]]:
        """Accepted solver steps as (x, state)."""
        return [
            (float(x), KineticState.from_sequence(row))
            for x, row in zip(self.xs, self.states, strict=True)
        ]

    def _evaluate(self, x: float) -> np.ndarray:
        if self.dense is None or not 0.0 <= x <= self.x_stop:
            raise InvalidArgumentError(f"x={x} outside the integrated range [0, {self.x_stop}]")
        return np.asarray(self.dense(x))

    def state_at(self, x: float) -> KineticState:
        """Interpolated state at ``x``."""
        return KineticState.from_sequence(np.exp(self._evaluate(x)[:5]))

    def integral_at(self, x: float) -> float:
        """Integral of b over [0, x]."""
        return float(self._evaluate(x)[5])


def _solve(
    r: int, y0: np.ndarray, x_end: float, options: OdeOptions, events: list[Callable[..., float]]
) -> Any:
    return solve_ivp(
        _log_rates(r),
        (0.0, x_end),
        y0,
        method=options.method.value,
        rtol=options.rel_tol,
        atol=options.abs_tol,
        events=events or None,
        dense_output=True,
    )


def integrate(
    r: int, p0: float, options: OdeOptions | None = None, *, x_end: float | None = None
) -> OdeSolution:
    """Integrate from ``initial_state(r, p0)``.

    Without ``x_end`` the integration stops once b has decayed below
    tail_tol / (10 r) and the remaining change of the integral plus the
    white limit, estimated as (r + 1) b over the current decay rate of b, is
    below tail_tol / 2. With ``x_end`` it runs to exactly that point.
    """
    check_degree(r)
    options = options or OdeOptions()
    start = initial_state(r, p0)
    if min(start) <= 0.0:
        raise DegenerateStateError(f"initial state not positive for p0={p0}: {start}")
    y0 = np.array([*(math.log(v) for v in start), 0.0])
    threshold = math.log(options.tail_tol / (10 * r))

    if x_end is not None:
        if not 0.0 < x_end:
            raise InvalidArgumentError(f"x_end must be positive, got {x_end}")
        result = _solve(r, y0, x_end, options, [])
        return _finish(r, p0, options, result, stopped=True, certified=False)

    log_half_tol = math.log(options.tail_tol / 2)

    def tail_reached(_x: float, y: np.ndarray) -> float:
        lb = float(y[1])
        small = lb - threshold
        decay = 1.0 + r * math.exp(float(y[4]) - lb) - r * math.exp(float(y[3]) - lb)
        if decay <= 0.0:
            return max(small, 1.0)
        return max(small, math.log((r + 1) / decay) + lb - log_half_tol)

    tail_reached.terminal = True  # type: ignore[attr-defined]
    tail_reached.direction = -1  # type: ignore[attr-defined]

    result = _solve(r, y0, options.x_max_cap, options, [tail_reached])
    stopped = result.status == 1
    solution = _finish(r, p0, options, result, stopped=stopped, certified=stopped)
    if not stopped:
        raise HorizonExceededError(
            f"b did not decay below {options.tail_tol / (10 * r):.3g} by x={options.x_max_cap}",
            x=solution.x_stop,
        )
    last = solution.states[-1]
    if last[3] > last[1]:
        logger.warning(
            "s exceeds b at x=%.4g for r=%d, p0=%g; integrating to x=%g",
            solution.x_stop, r, p0, options.x_max_cap,
        )
        result = _solve(r, y0, options.x_max_cap, options, [])
        solution = _finish(r, p0, options, result, stopped=True, certified=False)
    logger.debug(
        "r=%d p0=%g: x_stop=%.4g, integral=%.10g, w_limit=%.10g, ratio=%.6g",
        r, p0, solution.x_stop, solution.b_integral, solution.w_limit, solution.ratio_limit,
    )
    return solution


def _finish(
    r: int, p0: float, options: OdeOptions, result: Any, *, stopped: bool, certified: bool
) -> OdeSolution:
    if result.status < 0:
        raise IntegrationError(f"solver failed: {result.message}")
    xs = np.asarray(result.t)
    ys = np.asarray(result.y)
    if not np.all(np.isfinite(ys)):
        bad = int(np.argmax(~np.all(np.isfinite(ys), axis=0)))
        raise IntegrationError(f"state positivity lost near x={xs[bad]:.6g}", x=float(xs[bad]))
    states = np.exp(ys[:5].T)
    final = KineticState.from_sequence(states[-1])
    return OdeSolution(
        r=r,
        p0=p0,
        xs=xs,
        states=states,
        integrals=ys[5].copy(),
        b_integral=float(ys[5, -1]),
        w_limit=final.w,
        ratio_limit=white_ratio(final, r),
        x_stop=float(xs[-1]),
        options=options,
        tail_certified=certified and stopped,
        dense=result.sol,
    )


def as_trajectory(sol: OdeSolution, spacing: float) -> Trajectory:
    """Sample the solution on a uniform x grid."""
    if spacing <= 0:
        raise InvalidArgumentError(f"spacing must be positive, got {spacing}")
    count = int(math.floor(sol.x_stop / spacing + 1e-9))
    xs = [k * spacing for k in range(count + 1)]
    return Trajectory(mode=TrajectoryMode.ODE, points=tuple((x, sol.state_at(x)) for x in xs))
