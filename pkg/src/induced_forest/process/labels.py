"""Label-sequence model of the forest-growing process.

Every vertex draws a set of labels: label 0 with probability p0 and each
label 1..N with probability p. Relevant labels are assigned in passes
i = 0..N; the colouring at time l follows from the relevant labels alone.
The array kernels accept a trailing batch axis so the oracle can push many
label assignments through one pass.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import IntEnum

import numpy as np
from scipy import sparse

from induced_forest.core.errors import InvalidArgumentError
from induced_forest.core.graph import Graph, VertexSet

NO_LABEL = -1


class Color(IntEnum):
    """Vertex colours of the process."""
    WHITE = 0
    BLUE = 1
    ORANGE = 2
    PURPLE = 3


def check_probabilities(p0: float, p: float) -> None:
    """Reject probabilities outside 0 < p0 <= 1, 0 <= p < 1."""
    if not 0.0 < p0 <= 1.0:
        raise InvalidArgumentError(f"p0 must lie in (0, 1], got {p0}")
    if not 0.0 <= p < 1.0:
        raise InvalidArgumentError(f"p must lie in [0, 1), got {p}")


def label_probabilities(horizon: int, p0: float, p: float) -> np.ndarray:
    """Inclusion probability of each label value 0..horizon."""
    probs = np.full(horizon + 1, p, dtype=np.float64)
    probs[0] = p0
    return probs


@dataclass(frozen=True, eq=False)
class LabelSchedule:
    """Label sets S(v) for every vertex, stored as a (horizon+1, n) bool matrix."""
    horizon: int
    p0: float
    p: float
    held: np.ndarray

    def __post_init__(self) -> None:
        check_probabilities(self.p0, self.p)
        if self.horizon < 0:
            raise InvalidArgumentError(f"horizon must be non-negative, got {self.horizon}")
        if self.held.ndim != 2 or self.held.shape[0] != self.horizon + 1:
            raise InvalidArgumentError(
                f"label matrix must have shape (horizon+1, n), got {self.held.shape}"
            )
        self.held.setflags(write=False)

    @classmethod
    def from_label_sets(
        cls, horizon: int, p0: float, p: float, label_sets: Sequence[Iterable[int]]
    ) -> LabelSchedule:
        """Build a schedule from explicit per-vertex label sets."""
        held = np.zeros((horizon + 1, len(label_sets)), dtype=bool)
        for v, labels in enumerate(label_sets):
            for label in labels:
                if not 0 <= label <= horizon:
                    raise InvalidArgumentError(f"label {label} of vertex {v} outside 0..{horizon}")
                held[label, v] = True
        return cls(horizon=horizon, p0=p0, p=p, held=held)

    @property
    def n(self) -> int:
        """Number of vertices."""
        return int(self.held.shape[1])

    def labels(self, v: int) -> list[int]:
        """Ascending label list S(v)."""
        return np.flatnonzero(self.held[:, v]).tolist()


@dataclass(frozen=True, eq=False)
class RelevantLabeling:
    """Relevant label per vertex, NO_LABEL where a vertex never fires."""
    horizon: int
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values.setflags(write=False)

    def value(self, v: int) -> int | None:
        """Relevant label of ``v`` or None."""
        label = int(self.values[v])
        return None if label == NO_LABEL else label

    def up_to(self, i: int) -> VertexSet:
        """R_{<=i}: vertices whose relevant label is at most i."""
        mask = (self.values >= 0) & (self.values <= i)
        return frozenset(np.flatnonzero(mask).tolist())


@dataclass(frozen=True, eq=False)
class ColoringState:
    """Colour of every vertex at time ``time``."""
    time: int
    colors: np.ndarray

    def __post_init__(self) -> None:
        self.colors.setflags(write=False)

    def color_of(self, v: int) -> Color:
        """Colour of vertex ``v``."""
        return Color(int(self.colors[v]))

    def vertices(self, color: Color) -> VertexSet:
        """All vertices of the given colour."""
        return frozenset(np.flatnonzero(self.colors == color).tolist())

    def as_tuple(self) -> tuple[Color, ...]:
        """Colours in vertex order."""
        return tuple(Color(int(c)) for c in self.colors)


def sample_labels(n: int, horizon: int, p0: float, p: float, seed: int) -> LabelSchedule:
    """Draw S(v) for n vertices.

    Label 0 is drawn for every vertex first, then labels 1..N vertex-major,
    so the phase-1 draw of a seed does not depend on the horizon.
    """
    check_probabilities(p0, p)
    if n < 0 or horizon < 0:
        raise InvalidArgumentError(f"need n >= 0 and horizon >= 0, got n={n}, horizon={horizon}")
    if seed < 0:
        raise InvalidArgumentError(f"seed must be non-negative, got {seed}")
    rng = np.random.default_rng(seed)
    held = np.empty((horizon + 1, n), dtype=bool)
    held[0] = rng.random(n) < p0
    held[1:] = (rng.random((n, horizon)) < p).T
    return LabelSchedule(horizon=horizon, p0=p0, p=p, held=held)


def relevant_label_array(adjacency: sparse.csr_array, held: np.ndarray) -> np.ndarray:
    """Relevant labels for a (horizon+1, n[, batch]) membership array.

    Pass i only reads labels assigned in passes < i, so vertex order within
    a pass does not matter.
    """
    relevant = np.full(held.shape[1:], NO_LABEL, dtype=np.int64)
    relevant[held[0]] = 0
    for i in range(1, held.shape[0]):
        fired = (relevant >= 0).astype(np.int64)
        fired_neighbours = adjacency @ fired
        gains = held[i] & (relevant == NO_LABEL) & (fired_neighbours == 1)
        relevant[gains] = i
    return relevant


def color_array(adjacency: sparse.csr_array, relevant: np.ndarray, time: int) -> np.ndarray:
    """Colours at ``time`` for a relevant-label array of shape (n[, batch])."""
    purple = (relevant >= 0) & (relevant <= time)
    purple_neighbours = adjacency @ purple.astype(np.int64)
    colors = np.full(relevant.shape, Color.ORANGE, dtype=np.int8)
    colors[purple_neighbours == 0] = Color.WHITE
    colors[purple_neighbours == 1] = Color.BLUE
    colors[purple] = Color.PURPLE
    return colors


def relevant_labels(g: Graph, sched: LabelSchedule) -> RelevantLabeling:
    """Assign relevant labels to every vertex of ``g``."""
    if sched.n != g.n:
        raise InvalidArgumentError(f"schedule covers {sched.n} vertices, graph has {g.n}")
    values = relevant_label_array(g.adjacency_matrix, sched.held)
    return RelevantLabeling(horizon=sched.horizon, values=values)


def coloring_at(g: Graph, rl: RelevantLabeling, time: int) -> ColoringState:
    """Colouring of ``g`` at ``time``."""
    if not 0 <= time <= rl.horizon:
        raise InvalidArgumentError(f"time must lie in 0..{rl.horizon}, got {time}")
    return ColoringState(time=time, colors=color_array(g.adjacency_matrix, rl.values, time))
