"""Core functionality: settings, errors and graphs."""

from induced_forest.core.errors import InducedForestError, InvalidArgumentError
from induced_forest.core.fixtures import fixture
from induced_forest.core.graph import Graph, generate_regular, girth
from induced_forest.core.settings import Settings

__all__ = [
    "Graph",
    "InducedForestError",
    "InvalidArgumentError",
    "Settings",
    "fixture",
    "generate_regular",
    "girth",
]
