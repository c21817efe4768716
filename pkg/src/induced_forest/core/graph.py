"""Simple undirected graphs, random regular generation and acyclicity queries."""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import networkx as nx
import numpy as np
from scipy import sparse

from induced_forest.core.errors import GenerationError, InvalidArgumentError

logger = logging.getLogger(__name__)

VertexSet = frozenset[int]

DEFAULT_MAX_ATTEMPTS = 1000


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""
    n: int
    adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        """Build a graph, rejecting loops, parallel edges and out-of-range ends."""
        if n < 0:
            raise InvalidArgumentError(f"vertex count must be non-negative, got {n}")
        neighbours: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidArgumentError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InvalidArgumentError(f"self-loop at vertex {u}")
            if v in neighbours[u]:
                raise InvalidArgumentError(f"parallel edge ({u}, {v})")
            neighbours[u].add(v)
            neighbours[v].add(u)
        return cls(n=n, adjacency=tuple(tuple(sorted(adj)) for adj in neighbours))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> Graph:
        """Build from a networkx graph whose nodes are 0..n-1."""
        return cls.from_edges(graph.number_of_nodes(), graph.edges())

    @property
    def edge_count(self) -> int:
        """Number of edges."""
        return sum(len(adj) for adj in self.adjacency) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        """Iterate edges as (u, v) with u < v in lexicographic order."""
        for u, adj in enumerate(self.adjacency):
            for v in adj:
                if u < v:
                    yield u, v

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Sorted neighbours of ``v``."""
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        """Degree of ``v``."""
        return len(self.adjacency[v])

    def is_regular(self, r: int | None = None) -> bool:
        """True if every vertex has degree ``r`` (or a common degree if r is None)."""
        degrees = {len(adj) for adj in self.adjacency}
        if not degrees:
            return True
        if r is None:
            return len(degrees) == 1
        return degrees == {r}

    def check_vertex_set(self, s: Iterable[int]) -> VertexSet:
        """Return ``s`` as a VertexSet after checking every index is in range."""
        vertices = frozenset(s)
        for v in vertices:
            if not 0 <= v < self.n:
                raise InvalidArgumentError(f"vertex {v} out of range for n={self.n}")
        return vertices

    @cached_property
    def adjacency_matrix(self) -> sparse.csr_array:
        """Sparse 0/1 adjacency matrix used by the vectorized label process."""
        rows = [u for u, adj in enumerate(self.adjacency) for _ in adj]
        cols = [v for adj in self.adjacency for v in adj]
        data = np.ones(len(rows), dtype=np.int64)
        return sparse.csr_array((data, (rows, cols)), shape=(self.n, self.n))

    @cached_property
    def nx_graph(self) -> nx.Graph:
        """networkx view of the graph (built once, never mutated)."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return nx.freeze(graph)


def generate_regular(
    n: int,
    r: int,
    seed: int,
    *,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    strict: bool = False,
) -> Graph:
    """Generate a random simple r-regular graph in the pairing model.

    Args:
        n: Number of vertices
        r: Common degree
        seed: Non-negative seed; equal arguments give equal graphs
        max_attempts: Retry budget for whole pairings
        strict: Reject and resample the whole pairing on any loop or
            multi-edge. Otherwise only the offending points are re-paired.

    Returns:
        The generated graph
    """
    if n < 1 or r < 0:
        raise InvalidArgumentError(f"need n >= 1 and r >= 0, got n={n}, r={r}")
    if (n * r) % 2 != 0:
        raise InvalidArgumentError(f"n * r must be even, got n={n}, r={r}")
    if r >= n:
        raise InvalidArgumentError(f"need r < n, got n={n}, r={r}")
    if seed < 0:
        raise InvalidArgumentError(f"seed must be non-negative, got {seed}")

    rng = np.random.default_rng(seed)
    points = np.repeat(np.arange(n, dtype=np.int64), r)
    attempt_pairing = _strict_pairing if strict else _repaired_pairing

    for attempt in range(1, max_attempts + 1):
        edges = attempt_pairing(points, n, rng)
        if edges is not None:
            if attempt > 1:
                logger.debug("pairing for n=%d r=%d accepted on attempt %d", n, r, attempt)
            return Graph.from_edges(n, edges)

    raise GenerationError(
        f"no simple {r}-regular pairing on {n} vertices within {max_attempts} attempts"
    )


def _strict_pairing(
    points: np.ndarray, n: int, rng: np.random.Generator
) -> list[tuple[int, int]] | None:
    pairs = rng.permutation(points).reshape(-1, 2)
    lo = pairs.min(axis=1)
    hi = pairs.max(axis=1)
    if np.any(lo == hi):
        return None
    keys = lo * n + hi
    if np.unique(keys).size != keys.size:
        return None
    return list(zip(lo.tolist(), hi.tolist(), strict=True))


def _repaired_pairing(
    points: np.ndarray, n: int, rng: np.random.Generator
) -> list[tuple[int, int]] | None:
    edges: set[tuple[int, int]] = set()
    ordered: list[tuple[int, int]] = []
    stubs = points.copy()

    while stubs.size:
        rng.shuffle(stubs)
        leftover: dict[int, int] = defaultdict(int)
        it = iter(stubs.tolist())
        for s1, s2 in zip(it, it, strict=True):
            if s1 > s2:
                s1, s2 = s2, s1
            if s1 != s2 and (s1, s2) not in edges:
                edges.add((s1, s2))
                ordered.append((s1, s2))
            else:
                leftover[s1] += 1
                leftover[s2] += 1

        if not _has_free_pair(edges, leftover):
            return None

        stubs = np.array(
            [v for v, count in leftover.items() for _ in range(count)], dtype=np.int64
        )
    return ordered


def _has_free_pair(edges: set[tuple[int, int]], leftover: dict[int, int]) -> bool:
    # Some pair of leftover points must still be joinable
    if not leftover:
        return True
    for s1 in leftover:
        for s2 in leftover:
            if s1 == s2:
                break
            a, b = (s1, s2) if s1 < s2 else (s2, s1)
            if (a, b) not in edges:
                return True
    return False


def girth(g: Graph) -> int | float:
    """Length of a shortest cycle, or ``math.inf`` for a forest."""
    length = nx.girth(g.nx_graph)
    return math.inf if length == math.inf else int(length)


def induced_is_acyclic(g: Graph, s: Iterable[int]) -> bool:
    """True iff the subgraph induced by ``s`` is a forest."""
    vertices = g.check_vertex_set(s)
    induced = g.nx_graph.subgraph(vertices)
    components = nx.number_connected_components(induced) if vertices else 0
    return bool(induced.number_of_edges() == len(vertices) - components)


def acyclic_components(g: Graph, s: Iterable[int]) -> VertexSet:
    """Union of the connected components of G[s] that are trees."""
    vertices = g.check_vertex_set(s)
    induced = g.nx_graph.subgraph(vertices)
    kept: set[int] = set()
    for component in nx.connected_components(induced):
        if induced.subgraph(component).number_of_edges() == len(component) - 1:
            kept.update(component)
    return frozenset(kept)


def truncated_tree(r: int, depth: int) -> tuple[Graph, int]:
    """Ball of radius ``depth`` around a vertex of the infinite r-regular tree.

    The root has r children and every other internal vertex r-1 children.
    Vertices are numbered in breadth-first order, so the root is 0.
    """
    if r < 2 or depth < 0:
        raise InvalidArgumentError(f"need r >= 2 and depth >= 0, got r={r}, depth={depth}")
    edges: list[tuple[int, int]] = []
    size = _grow(edges, [0], 1, r, depth, first_fanout=r)
    return Graph.from_edges(size, edges), 0


def truncated_edge_tree(r: int, depth: int) -> tuple[Graph, tuple[int, int]]:
    """Vertices within ``depth`` of either end of an edge of the r-regular tree.

    The edge is (0, 1); every other internal vertex has r-1 children.
    """
    if r < 2 or depth < 0:
        raise InvalidArgumentError(f"need r >= 2 and depth >= 0, got r={r}, depth={depth}")
    edges: list[tuple[int, int]] = [(0, 1)]
    size = _grow(edges, [0, 1], 2, r, depth, first_fanout=r - 1)
    return Graph.from_edges(size, edges), (0, 1)


def _grow(
    edges: list[tuple[int, int]],
    frontier: list[int],
    size: int,
    r: int,
    depth: int,
    *,
    first_fanout: int,
) -> int:
    fanout = first_fanout
    for _ in range(depth):
        next_frontier = []
        for parent in frontier:
            for _ in range(fanout):
                edges.append((parent, size))
                next_frontier.append(size)
                size += 1
        frontier = next_frontier
        fanout = r - 1
    return size


def read_graph(path: Path) -> Graph:
    """Read a graph in the text format: "n m" then m lines "u v" (0-based)."""
    try:
        lines = [line.split() for line in path.read_text(encoding="utf-8").splitlines()]
        lines = [line for line in lines if line]
        n, m = (int(x) for x in lines[0])
        edges = [(int(u), int(v)) for u, v in lines[1:]]
    except (OSError, ValueError, IndexError) as e:
        raise InvalidArgumentError(f"could not read graph from {path}: {e}") from e
    if len(edges) != m:
        raise InvalidArgumentError(f"{path}: header announces {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def write_graph(g: Graph, path: Path) -> Path:
    """Write ``g`` in the text format with edges sorted and u < v."""
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{g.n} {g.edge_count}"] + [f"{u} {v}" for u, v in g.edges()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
