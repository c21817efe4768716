"""Kinetic state (w, b, q, s, t) shared by the recurrences and the ODE."""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import astuple, dataclass
from enum import Enum

import numpy as np

from induced_forest.core.errors import InvalidArgumentError

FIELDS = ("w", "b", "q", "s", "t")


class TrajectoryMode(str, Enum):
    """How a trajectory was produced."""
    EXACT = "exact"
    LINEARIZED = "linearized"
    ODE = "ode"


@dataclass(frozen=True)
class KineticState:
    """Probabilities of a vertex being white or blue and of an edge's end colours.

    w, b: vertex white / blue. q: both ends white. s: one end white, the
    other blue (ordered). t: both ends blue.
    """
    w: float
    b: float
    q: float
    s: float
    t: float

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> KineticState:
        """Build a state from five values in field order."""
        w, b, q, s, t = (float(v) for v in values)
        return cls(w=w, b=b, q=q, s=s, t=t)

    def __iter__(self) -> Iterator[float]:
        return iter(astuple(self))

    def as_array(self) -> np.ndarray:
        """Return (w, b, q, s, t) as a float array."""
        return np.array(astuple(self), dtype=np.float64)

    def in_unit_cube(self, tol: float = 0.0) -> bool:
        """All coordinates in [0, 1] up to ``tol``."""
        return all(-tol <= v <= 1.0 + tol for v in self)

    def satisfies_pair_bounds(self, tol: float = 0.0) -> bool:
        """q + s <= w and s + t <= b up to ``tol``."""
        return self.q + self.s <= self.w + tol and self.s + self.t <= self.b + tol


def check_degree(r: int) -> None:
    """Raise InvalidArgumentError unless r >= 3."""
    if r < 3:
        raise InvalidArgumentError(f"degree must be at least 3, got {r}")


def check_p0(p0: float) -> None:
    """Raise InvalidArgumentError unless 0 < p0 < 1."""
    if not 0.0 < p0 < 1.0:
        raise InvalidArgumentError(f"p0 must lie strictly between 0 and 1, got {p0}")


def initial_state(r: int, p0: float) -> KineticState:
    """State after phase 1, when only label 0 has been used."""
    check_degree(r)
    check_p0(p0)
    return KineticState(
        w=(1 - p0) ** (r + 1),
        b=r * p0 * (1 - p0) ** r,
        q=(1 - p0) ** (2 * r),
        s=(r - 1) * p0 * (1 - p0) ** (2 * r - 1),
        t=(r - 1) ** 2 * p0**2 * (1 - p0) ** (2 * r - 2),
    )


def white_ratio(state: KineticState, r: int) -> float:
    """(r-1) q / w: expected white neighbours of a white vertex, through one edge."""
    if state.w <= 0 or not math.isfinite(state.w):
        return math.inf
    return (r - 1) * state.q / state.w


@dataclass(frozen=True)
class Trajectory:
    """Ordered (step or x, state) pairs with uniform spacing."""
    mode: TrajectoryMode
    points: tuple[tuple[float, KineticState], ...]

    @property
    def states(self) -> list[KineticState]:
        """Every row as a KineticState."""
        return [state for _, state in self.points]

    @property
    def xs(self) -> np.ndarray:
        """Positions of the states: step index or x."""
        return np.array([x for x, _ in self.points], dtype=np.float64)

    def column(self, name: str) -> np.ndarray:
        """One coordinate along the trajectory."""
        if name not in FIELDS:
            raise InvalidArgumentError(f"unknown coordinate {name!r}")
        return np.array([getattr(state, name) for state in self.states], dtype=np.float64)
