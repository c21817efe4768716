"""Named cubic graphs of known girth used as test instances."""

from __future__ import annotations

import networkx as nx

from induced_forest.core.errors import InvalidArgumentError
from induced_forest.core.graph import Graph

# Outer 5-cycle, spokes, inner pentagram
_PETERSEN_EDGES = [
    (0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
    (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
    (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),
]

# Hamiltonian graphs in LCF notation: (vertex count, shifts, repeats)
_LCF_CODES: dict[str, tuple[int, list[int], int]] = {
    "heawood": (14, [5, -5], 7),
    "mcgee": (24, [12, 7, -7], 8),
}

FIXTURE_NAMES = ("petersen", "heawood", "mcgee")


def fixture(name: str) -> Graph:
    """Return a named cubic fixture.

    petersen: 10 vertices, girth 5; heawood: 14 vertices, girth 6;
    mcgee: 24 vertices, girth 7.
    """
    key = name.strip().lower()
    if key == "petersen":
        return Graph.from_edges(10, _PETERSEN_EDGES)
    if key in _LCF_CODES:
        n, shifts, repeats = _LCF_CODES[key]
        return Graph.from_networkx(nx.LCF_graph(n, shifts, repeats))
    raise InvalidArgumentError(
        f"unknown fixture {name!r}; expected one of {', '.join(FIXTURE_NAMES)}"
    )
