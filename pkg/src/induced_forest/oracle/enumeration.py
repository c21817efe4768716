"""Exact enumeration and Monte-Carlo sampling of label sets on small graphs.

Both engines push a batch of label assignments through the relevant-label
kernel and hand the result to an observer. The observer maps each
assignment to an integer category per named quantity (negative means "not
counted"); the engines return the probability of every category.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import sparse

from induced_forest.analysis.state import check_degree
from induced_forest.core.errors import BudgetExceededError, InvalidArgumentError
from induced_forest.core.graph import Graph, truncated_edge_tree, truncated_tree
from induced_forest.process.labels import (
    NO_LABEL,
    Color,
    check_probabilities,
    color_array,
    label_probabilities,
    relevant_label_array,
)

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 2**30
CHUNK = 1 << 16


class BallMode(str, Enum):
    """Neighbourhood enumerated by the oracle."""
    SINGLE = "single"
    PAIR = "pair"


@dataclass(frozen=True)
class EnumerationSpec:
    """Degree, target time, probabilities and ball shape of one oracle query."""
    r: int
    i: int
    p0: float
    p: float
    mode: BallMode = BallMode.SINGLE

    def __post_init__(self) -> None:
        check_degree(self.r)
        check_probabilities(self.p0, self.p)
        if self.i < 0:
            raise InvalidArgumentError(f"time must be non-negative, got {self.i}")

    @property
    def horizon(self) -> int:
        """Last time step the colours are needed for."""
        return self.i

    @property
    def radius(self) -> int:
        """Colours at time i depend only on labels within distance i + 1."""
        return self.i + 1

    def ball(self) -> tuple[Graph, tuple[int, ...]]:
        """Truncated tree and its centre vertices."""
        if self.mode is BallMode.PAIR:
            graph, edge = truncated_edge_tree(self.r, self.radius)
            return graph, edge
        graph, root = truncated_tree(self.r, self.radius)
        return graph, (root,)


@dataclass(frozen=True, eq=False)
class LabelBatch:
    """Relevant labels of a batch of assignments, shape (n, batch)."""
    adjacency: sparse.csr_array
    relevant: np.ndarray
    _colors: dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        """Number of label assignments in the batch."""
        return int(self.relevant.shape[1])

    def colors(self, time: int) -> np.ndarray:
        """Colours at ``time`` (an earlier time than the horizon is allowed)."""
        if time not in self._colors:
            self._colors[time] = color_array(self.adjacency, self.relevant, time)
        return self._colors[time]

    def fired_by(self, time: int) -> np.ndarray:
        """Vertices whose relevant label is at most ``time``."""
        return (self.relevant != NO_LABEL) & (self.relevant <= time)


Observer = Callable[[LabelBatch], Mapping[str, np.ndarray]]


@dataclass(frozen=True, eq=False)
class Distribution:
    """Category probabilities per observed quantity.

    ``samples`` is None for exact enumeration and the sample count for
    Monte-Carlo estimates.
    """
    probabilities: dict[str, np.ndarray]
    samples: int | None = None

    @property
    def exact(self) -> bool:
        """True when the probabilities come from full enumeration."""
        return self.samples is None

    @property
    def method(self) -> str:
        """Either exact or monte-carlo."""
        return "exact" if self.exact else "monte-carlo"

    def prob(self, name: str, categories: int | list[int]) -> float:
        """Probability that ``name`` falls in ``categories``."""
        values = self.probabilities[name]
        picked = [categories] if isinstance(categories, int) else categories
        return math.fsum(float(values[c]) for c in picked if 0 <= c < values.size)

    def conditional(
        self, name: str, event: int | list[int], given: list[int]
    ) -> tuple[float, float | None] | None:
        """P(event | given) with its standard error, or None if P(given) = 0."""
        joint_categories = [event] if isinstance(event, int) else event
        p_given = self.prob(name, given)
        if p_given <= 0.0:
            return None
        value = self.prob(name, [c for c in joint_categories if c in given]) / p_given
        if self.samples is None:
            return value, None
        return value, math.sqrt(max(value * (1 - value), 0.0) / (self.samples * p_given))


def _accumulate(totals: dict[str, list[np.ndarray]], observed: Mapping[str, np.ndarray],
                weights: np.ndarray | None) -> None:
    for name, codes in observed.items():
        keep = codes >= 0
        counted = np.bincount(codes[keep], weights=None if weights is None else weights[keep])
        totals.setdefault(name, []).append(counted.astype(np.float64))


def _combine(totals: dict[str, list[np.ndarray]]) -> dict[str, np.ndarray]:
    combined = {}
    for name, parts in totals.items():
        width = max(part.size for part in parts)
        stacked = np.zeros((len(parts), width))
        for row, part in enumerate(parts):
            stacked[row, : part.size] = part
        combined[name] = stacked.sum(axis=0)
    return combined


def assignment_count(n: int, horizon: int) -> int:
    """Number of label-set assignments of ``n`` vertices with labels 0..horizon."""
    return 1 << (n * (horizon + 1))


def exact_distribution(
    graph: Graph,
    horizon: int,
    p0: float,
    p: float,
    observe: Observer,
    *,
    budget: int = DEFAULT_BUDGET,
) -> Distribution:
    """Sum product weights over every label-set assignment of ``graph``.

    Assignment k holds label l at vertex v iff bit v * (horizon+1) + l of
    k is set. Chunks are reduced in a fixed order.
    """
    check_probabilities(p0, p)
    width = horizon + 1
    bits = graph.n * width
    size = assignment_count(graph.n, horizon)
    if size > budget:
        raise BudgetExceededError(
            f"{size} assignments exceed the enumeration budget {budget}", size=size, budget=budget
        )
    bit_probs = np.tile(label_probabilities(horizon, p0, p), graph.n)[:, None]
    shifts = np.arange(bits, dtype=np.uint64)[:, None]
    totals: dict[str, list[np.ndarray]] = {}
    for start in range(0, size, CHUNK):
        index = np.arange(start, min(start + CHUNK, size), dtype=np.uint64)
        held_bits = ((index[None, :] >> shifts) & np.uint64(1)).astype(bool)
        weights = np.prod(np.where(held_bits, bit_probs, 1.0 - bit_probs), axis=0)
        held = held_bits.reshape(graph.n, width, -1).transpose(1, 0, 2)
        relevant = relevant_label_array(graph.adjacency_matrix, held)
        _accumulate(totals, observe(LabelBatch(graph.adjacency_matrix, relevant)), weights)
    return Distribution(probabilities=_combine(totals))


def sampled_distribution(
    graph: Graph,
    horizon: int,
    p0: float,
    p: float,
    observe: Observer,
    *,
    samples: int,
    seed: int,
) -> Distribution:
    """Estimate the same distribution from ``samples`` independent label draws."""
    check_probabilities(p0, p)
    if samples < 1:
        raise InvalidArgumentError(f"samples must be at least 1, got {samples}")
    rng = np.random.default_rng(seed)
    probs = label_probabilities(horizon, p0, p)[:, None, None]
    totals: dict[str, list[np.ndarray]] = {}
    for start in range(0, samples, CHUNK):
        batch = min(CHUNK, samples - start)
        held = rng.random((horizon + 1, graph.n, batch)) < probs
        relevant = relevant_label_array(graph.adjacency_matrix, held)
        _accumulate(totals, observe(LabelBatch(graph.adjacency_matrix, relevant)), None)
    counts = _combine(totals)
    return Distribution(
        probabilities={name: values / samples for name, values in counts.items()},
        samples=samples,
    )


def distribution(
    graph: Graph,
    horizon: int,
    p0: float,
    p: float,
    observe: Observer,
    *,
    budget: int = DEFAULT_BUDGET,
    samples: int,
    seed: int,
    prefer_exact: bool = True,
) -> Distribution:
    """Exact enumeration when it fits the budget and is preferred, else Monte-Carlo."""
    if prefer_exact:
        try:
            return exact_distribution(graph, horizon, p0, p, observe, budget=budget)
        except BudgetExceededError as e:
            logger.warning("Falling back to Monte-Carlo with %d samples: %s", samples, e)
    return sampled_distribution(graph, horizon, p0, p, observe, samples=samples, seed=seed)


def exact_colors(
    graph: Graph, vertex: int, time: int, p0: float, p: float, *, budget: int = DEFAULT_BUDGET
) -> np.ndarray:
    """Exact probabilities of the four colours of ``vertex`` at ``time``."""

    def observe(batch: LabelBatch) -> dict[str, np.ndarray]:
        return {"color": batch.colors(time)[vertex].astype(np.int64)}

    dist = exact_distribution(graph, time, p0, p, observe, budget=budget)
    result = np.zeros(len(Color))
    values = dist.probabilities["color"]
    result[: values.size] = values
    return result


def exact_single(spec: EnumerationSpec, *, budget: int = DEFAULT_BUDGET) -> tuple[float, float]:
    """Exact (w_i, b_i) for the root of the radius-(i+1) tree."""
    if spec.mode is not BallMode.SINGLE:
        raise InvalidArgumentError("exact_single needs a single-vertex specification")
    graph, (root,) = spec.ball()
    colors = exact_colors(graph, root, spec.i, spec.p0, spec.p, budget=budget)
    return float(colors[Color.WHITE]), float(colors[Color.BLUE])


@dataclass(frozen=True)
class PairEstimate:
    """Estimates of (q_i, s_i, t_i) with standard errors (zero when exact)."""
    q: float
    s: float
    t: float
    q_err: float
    s_err: float
    t_err: float
    samples: int | None
    seed: int | None


def pair_observer(time: int, ends: tuple[int, int]) -> Observer:
    """Observe the joint colour of an edge's ends as 4 * colour(u) + colour(v)."""
    u, v = ends

    def observe(batch: LabelBatch) -> dict[str, np.ndarray]:
        colors = batch.colors(time).astype(np.int64)
        return {"pair": 4 * colors[u] + colors[v]}

    return observe


def _pair_estimate(dist: Distribution, seed: int | None) -> PairEstimate:
    def estimate(category: int) -> tuple[float, float]:
        value = dist.prob("pair", category)
        if dist.samples is None:
            return value, 0.0
        return value, math.sqrt(value * (1 - value) / dist.samples)

    q, q_err = estimate(4 * Color.WHITE + Color.WHITE)
    s, s_err = estimate(4 * Color.WHITE + Color.BLUE)
    t, t_err = estimate(4 * Color.BLUE + Color.BLUE)
    return PairEstimate(q, s, t, q_err, s_err, t_err, samples=dist.samples, seed=seed)


def mc_pair(spec: EnumerationSpec, samples: int, seed: int) -> PairEstimate:
    """Monte-Carlo estimates of the pair probabilities on the double ball."""
    if spec.mode is not BallMode.PAIR:
        raise InvalidArgumentError("mc_pair needs a pair specification")
    graph, (u, v) = spec.ball()
    observe = pair_observer(spec.i, (u, v))
    dist = sampled_distribution(graph, spec.i, spec.p0, spec.p, observe, samples=samples, seed=seed)
    return _pair_estimate(dist, seed)


def exact_pair(spec: EnumerationSpec, *, budget: int = DEFAULT_BUDGET) -> PairEstimate:
    """Exact pair probabilities; 4^14 assignments already at r=3, i=1, so slow."""
    if spec.mode is not BallMode.PAIR:
        raise InvalidArgumentError("exact_pair needs a pair specification")
    graph, (u, v) = spec.ball()
    logger.info("Enumerating %d pair assignments", assignment_count(graph.n, spec.i))
    dist = exact_distribution(graph, spec.i, spec.p0, spec.p, pair_observer(spec.i, (u, v)),
                              budget=budget)
    return _pair_estimate(dist, None)
