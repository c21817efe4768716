"""Label process and the forest-growing algorithm."""

from induced_forest.process.forest import AlgorithmParams, ForestResult, repair, run
from induced_forest.process.labels import Color, coloring_at, relevant_labels, sample_labels
from induced_forest.process.simulation import GeneratorSpec, empirical_forest_fraction

__all__ = [
    "AlgorithmParams",
    "Color",
    "ForestResult",
    "GeneratorSpec",
    "coloring_at",
    "empirical_forest_fraction",
    "relevant_labels",
    "repair",
    "run",
    "sample_labels",
]
