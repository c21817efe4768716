"""Repeated seeded runs and their summary statistics."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np

from induced_forest.core.errors import InvalidArgumentError
from induced_forest.core.graph import Graph, generate_regular
from induced_forest.process.forest import AlgorithmParams, ForestResult, run

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratorSpec:
    """Random r-regular graph on n vertices, redrawn for every run."""
    n: int
    r: int
    strict: bool = False

    def build(self, seed: int) -> Graph:
        """Generate the graph for one run."""
        return generate_regular(self.n, self.r, seed, strict=self.strict)


@dataclass(frozen=True)
class Summary:
    """Mean, sample standard deviation, minimum and maximum of a sample."""
    mean: float
    std: float
    min: float
    max: float

    @classmethod
    def of(cls, values: list[float]) -> Summary:
        """Summarise a non-empty sample."""
        data = np.asarray(values, dtype=np.float64)
        std = float(data.std(ddof=1)) if data.size > 1 else 0.0
        return cls(mean=float(data.mean()), std=std, min=float(data.min()), max=float(data.max()))

    def to_dict(self) -> dict[str, float]:
        """Convert to a JSON-ready dictionary."""
        return {"mean": self.mean, "std": self.std, "min": self.min, "max": self.max}


@dataclass(frozen=True)
class RunSeeds:
    """Seeds of one run: graph generation (None for a fixed graph) and labels."""
    graph: int | None
    labels: int


@dataclass(frozen=True)
class SimulationStats:
    """Statistics over independent runs, all fractions of n."""
    runs: int
    seeds: tuple[RunSeeds, ...]
    forest: Summary
    repairs: Summary
    pruned_purple: Summary
    harvested_white: Summary

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary."""
        return {
            "runs": self.runs,
            "seeds": [{"graph": s.graph, "labels": s.labels} for s in self.seeds],
            "forest_fraction": self.forest.to_dict(),
            "repairs_fraction": self.repairs.to_dict(),
            "pbar_fraction": self.pruned_purple.to_dict(),
            "wbar_fraction": self.harvested_white.to_dict(),
        }


def run_seeds(seed: int, runs: int, fixed_graph: bool) -> tuple[RunSeeds, ...]:
    """Derive independent per-run seeds from one root seed."""
    children = np.random.SeedSequence(seed).spawn(runs)
    seeds = []
    for child in children:
        graph_seed, label_seed = (int(x) for x in child.generate_state(2, dtype=np.uint64))
        seeds.append(RunSeeds(graph=None if fixed_graph else graph_seed, labels=label_seed))
    return tuple(seeds)


def _simulate_one(
    source: GeneratorSpec | Graph, params: AlgorithmParams, seeds: RunSeeds
) -> tuple[int, ForestResult]:
    if isinstance(source, Graph):
        g = source
    else:
        assert seeds.graph is not None
        g = source.build(seeds.graph)
    return g.n, run(g, params.with_seed(seeds.labels))


def empirical_forest_fraction(
    source: GeneratorSpec | Graph,
    params: AlgorithmParams,
    runs: int,
    *,
    workers: int = 1,
) -> SimulationStats:
    """Run the algorithm ``runs`` times and summarise the set sizes.

    With a ``GeneratorSpec`` every run draws a fresh graph; with a ``Graph``
    only the labels change between runs. ``params.seed`` is the root seed.
    Results do not depend on ``workers``.
    """
    if runs < 1:
        raise InvalidArgumentError(f"runs must be at least 1, got {runs}")
    if workers < 1:
        raise InvalidArgumentError(f"workers must be at least 1, got {workers}")
    seeds = run_seeds(params.seed, runs, isinstance(source, Graph))
    jobs = [(source, params, s) for s in seeds]
    if workers == 1:
        outcomes = [_simulate_one(*job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_simulate_one, *zip(*jobs)))

    def fractions(key: str) -> list[float]:
        return [result.counts[key] / n for n, result in outcomes]

    stats = SimulationStats(
        runs=runs,
        seeds=seeds,
        forest=Summary.of(fractions("forest")),
        repairs=Summary.of(fractions("repairs_removed")),
        pruned_purple=Summary.of(fractions("pruned_purple")),
        harvested_white=Summary.of(fractions("harvested_white")),
    )
    logger.info(
        "%d runs: forest fraction %.6f +/- %.6f", runs, stats.forest.mean, stats.forest.std
    )
    return stats
