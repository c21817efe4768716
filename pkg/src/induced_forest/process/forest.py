"""Forest-growing algorithm: labels, colouring, pruning, white harvest and repair."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

import networkx as nx
import numpy as np

from induced_forest.core.errors import InvalidArgumentError
from induced_forest.core.graph import Graph, VertexSet, acyclic_components
from induced_forest.process.labels import (
    NO_LABEL,
    Color,
    ColoringState,
    RelevantLabeling,
    check_probabilities,
    color_array,
    coloring_at,
    relevant_labels,
    sample_labels,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlgorithmParams:
    """Step count, probabilities and seed of one run."""
    N: int
    p0: float
    p: float
    seed: int = 0

    def __post_init__(self) -> None:
        check_probabilities(self.p0, self.p)
        if self.N < 0:
            raise InvalidArgumentError(f"N must be non-negative, got {self.N}")
        if not 0 <= self.seed < 2**64:
            raise InvalidArgumentError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def with_seed(self, seed: int) -> AlgorithmParams:
        """Same parameters, different seed."""
        return AlgorithmParams(N=self.N, p0=self.p0, p=self.p, seed=seed)

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary."""
        return {"N": self.N, "p0": self.p0, "p": self.p, "seed": self.seed}


@dataclass(frozen=True)
class ForestResult:
    """Every vertex set produced by one run."""
    purple: VertexSet
    pruned_purple: VertexSet
    white: VertexSet
    harvested_white: VertexSet
    repairs_removed: VertexSet
    forest: VertexSet

    @property
    def counts(self) -> dict[str, int]:
        """Sizes of all sets."""
        return {
            "purple": len(self.purple),
            "pruned_purple": len(self.pruned_purple),
            "white": len(self.white),
            "harvested_white": len(self.harvested_white),
            "repairs_removed": len(self.repairs_removed),
            "forest": len(self.forest),
        }

    def to_json_dict(self, g: Graph, params: AlgorithmParams) -> dict[str, Any]:
        """Result record as emitted by ``simulate``."""
        degrees = {g.degree(v) for v in range(g.n)}
        return {
            "n": g.n,
            "r": degrees.pop() if len(degrees) == 1 else None,
            "params": params.to_dict(),
            "forest_size": len(self.forest),
            "pbar_size": len(self.pruned_purple),
            "wbar_size": len(self.harvested_white),
            "repairs": len(self.repairs_removed),
            "fraction": len(self.forest) / g.n if g.n else 0.0,
        }


def prune_same_step(g: Graph, rl: RelevantLabeling) -> VertexSet:
    """Drop both ends of every edge whose ends share a relevant label."""
    values = rl.values
    coo = g.adjacency_matrix.tocoo()
    rows, cols = coo.row, coo.col
    clash = (values[rows] != NO_LABEL) & (values[rows] == values[cols])
    removed = set(rows[clash].tolist())
    relevant = np.flatnonzero(values != NO_LABEL).tolist()
    return frozenset(v for v in relevant if v not in removed)


def repair(g: Graph, candidate: VertexSet) -> tuple[VertexSet, VertexSet]:
    """Greedily delete vertices until G[candidate] is a forest.

    A graph has a cycle iff its 2-core is non-empty. While it is, the
    2-core vertex of largest core degree is removed, lowest index first.
    """
    kept = set(g.check_vertex_set(candidate))
    removed: set[int] = set()
    core = nx.k_core(g.nx_graph.subgraph(kept), 2)
    while core.number_of_nodes():
        victim = max(core.nodes, key=lambda v: (core.degree(v), -v))
        removed.add(victim)
        kept.discard(victim)
        core = nx.k_core(g.nx_graph.subgraph(set(core.nodes) - {victim}), 2)
    if removed:
        logger.info("Repair removed %d of %d candidate vertices", len(removed), len(candidate))
    return frozenset(kept), frozenset(removed)


def harvest(g: Graph, rl: RelevantLabeling, coloring: ColoringState) -> ForestResult:
    """Build P, P-bar, W, W-bar and the certified forest from a finished colouring."""
    purple = rl.up_to(coloring.time)
    pruned = prune_same_step(g, rl)
    white = coloring.vertices(Color.WHITE)
    harvested = acyclic_components(g, white)
    forest, removed = repair(g, pruned | harvested)
    return ForestResult(
        purple=purple,
        pruned_purple=pruned,
        white=white,
        harvested_white=harvested,
        repairs_removed=removed,
        forest=forest,
    )


def run(g: Graph, params: AlgorithmParams) -> ForestResult:
    """One run of the algorithm through the label model, deterministic per seed."""
    sched = sample_labels(g.n, params.N, params.p0, params.p, params.seed)
    rl = relevant_labels(g, sched)
    result = harvest(g, rl, coloring_at(g, rl, params.N))
    logger.debug("Run seed=%d: %s", params.seed, result.counts)
    return result


def run_sequential(g: Graph, params: AlgorithmParams) -> tuple[RelevantLabeling, ColoringState]:
    """Run the algorithm literally, step by step.

    Phase 1 colours each vertex purple with probability p0; each later
    step colours every blue vertex purple with probability p. The step at
    which a vertex turned purple plays the part of its relevant label.
    """
    rng = np.random.default_rng(params.seed)
    adjacency = g.adjacency_matrix
    added_at = np.full(g.n, NO_LABEL, dtype=np.int64)
    added_at[rng.random(g.n) < params.p0] = 0
    for step in range(1, params.N + 1):
        colors = color_array(adjacency, added_at, step - 1)
        chosen = (colors == Color.BLUE) & (rng.random(g.n) < params.p)
        added_at[chosen] = step
    rl = RelevantLabeling(horizon=params.N, values=added_at)
    return rl, coloring_at(g, rl, params.N)
