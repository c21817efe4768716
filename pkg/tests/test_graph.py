"""Tests for graph module."""

import math

import networkx as nx
import pytest

from induced_forest.core.errors import GenerationError, InvalidArgumentError
from induced_forest.core.fixtures import FIXTURE_NAMES, fixture
from induced_forest.core.graph import (
    Graph,
    acyclic_components,
    generate_regular,
    girth,
    induced_is_acyclic,
    read_graph,
    truncated_edge_tree,
    truncated_tree,
    write_graph,
)


def path(n: int, start: int = 0) -> list[tuple[int, int]]:
    return [(start + k, start + k + 1) for k in range(n - 1)]


def cycle(n: int, start: int = 0) -> list[tuple[int, int]]:
    return [*path(n, start), (start, start + n - 1)]


class TestGraph:
    """Tests for the Graph value type."""

    def test_from_edges_sorts_neighbours(self):
        """Test adjacency lists are sorted and symmetric."""
        g = Graph.from_edges(4, [(2, 0), (0, 1), (3, 0)])

        assert g.neighbors(0) == (1, 2, 3)
        assert g.neighbors(2) == (0,)
        assert g.edge_count == 3
        assert list(g.edges()) == [(0, 1), (0, 2), (0, 3)]

    @pytest.mark.parametrize(
        "edges",
        [[(0, 0)], [(0, 1), (1, 0)], [(0, 5)], [(-1, 0)]],
        ids=["loop", "parallel", "too-large", "negative"],
    )
    def test_from_edges_rejects_bad_edges(self, edges):
        """Test loops, parallel edges and out-of-range ends are rejected."""
        with pytest.raises(InvalidArgumentError):
            Graph.from_edges(3, edges)

    def test_is_regular(self):
        """Test regularity detection."""
        g = Graph.from_edges(4, cycle(4))

        assert g.is_regular()
        assert g.is_regular(2)
        assert not g.is_regular(3)
        assert not Graph.from_edges(3, path(3)).is_regular()

    def test_adjacency_matrix(self):
        """Test the sparse adjacency matrix is symmetric 0/1."""
        g = Graph.from_edges(3, path(3))
        dense = g.adjacency_matrix.toarray()

        assert dense.tolist() == [[0, 1, 0], [1, 0, 1], [0, 1, 0]]

    def test_nx_graph_is_frozen(self):
        """Test the networkx view cannot be mutated."""
        g = Graph.from_edges(3, path(3))

        assert nx.is_frozen(g.nx_graph)
        assert g.nx_graph.number_of_edges() == 2

    def test_check_vertex_set(self):
        """Test vertex range checking."""
        g = Graph.from_edges(3, path(3))

        assert g.check_vertex_set([0, 2, 2]) == frozenset({0, 2})
        with pytest.raises(InvalidArgumentError):
            g.check_vertex_set([3])


class TestGenerateRegular:
    """Tests for random regular graph generation."""

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_cubic_on_ten_vertices(self, seed):
        """Test handshake count and degrees."""
        g = generate_regular(10, 3, seed)

        assert g.edge_count == 15
        assert g.is_regular(3)

    def test_odd_degree_sum_rejected(self):
        """Test n * r odd is invalid."""
        with pytest.raises(InvalidArgumentError):
            generate_regular(5, 3, 0)

    @pytest.mark.parametrize("seed", range(5))
    def test_four_vertices_gives_complete_graph(self, seed):
        """Test the only cubic graph on 4 vertices is K4."""
        g = generate_regular(4, 3, seed)

        assert g.edge_count == 6
        assert girth(g) == 3

    def test_deterministic_per_seed(self):
        """Test equal seeds give equal graphs."""
        assert generate_regular(200, 4, 42) == generate_regular(200, 4, 42)
        assert generate_regular(200, 4, 42) != generate_regular(200, 4, 43)

    def test_strict_mode(self):
        """Test whole-pairing rejection still yields simple regular graphs."""
        g = generate_regular(50, 3, 7, strict=True)

        assert g.is_regular(3)

    def test_generation_budget(self):
        """Test the retry budget is enforced."""
        with pytest.raises(GenerationError):
            generate_regular(500, 8, 0, strict=True, max_attempts=1)

    @pytest.mark.parametrize("r", [3, 5, 8])
    def test_larger_degrees(self, r):
        """Test generation at larger degree."""
        g = generate_regular(1000, r, 11)

        assert g.is_regular(r)
        assert g.edge_count == 1000 * r // 2

    @pytest.mark.parametrize(("n", "r"), [(50, 3), (100, 4), (200, 5)])
    def test_regular_for_many_seeds(self, n, r):
        """Test every one of 100 seeds gives a simple r-regular graph."""
        for seed in range(100):
            g = generate_regular(n, r, seed)

            assert g.is_regular(r), seed
            assert g.edge_count == n * r // 2, seed


class TestGirth:
    """Tests for girth and acyclicity queries."""

    def test_petersen(self):
        """Test the Petersen graph has girth 5."""
        assert girth(fixture("petersen")) == 5

    def test_tree_is_infinite(self):
        """Test a tree has infinite girth."""
        g, _ = truncated_tree(3, 3)

        assert girth(g) == math.inf

    def test_induced_is_acyclic(self):
        """Test acyclicity of induced subgraphs."""
        triangle = Graph.from_edges(3, cycle(3))
        tree, _ = truncated_tree(3, 2)

        assert induced_is_acyclic(triangle, set())
        assert not induced_is_acyclic(triangle, {0, 1, 2})
        assert induced_is_acyclic(triangle, {0, 1})
        assert induced_is_acyclic(tree, range(tree.n))

    def test_acyclic_components_tree(self):
        """Test a tree is kept whole."""
        tree, _ = truncated_tree(3, 2)

        assert acyclic_components(tree, range(tree.n)) == frozenset(range(tree.n))

    def test_acyclic_components_drops_cyclic(self):
        """Test cyclic components are dropped and tree components kept."""
        g = Graph.from_edges(4, cycle(3))
        assert acyclic_components(g, range(4)) == frozenset({3})

        g = Graph.from_edges(9, [*path(5), *cycle(4, start=5)])
        assert acyclic_components(g, range(9)) == frozenset(range(5))


class TestTruncatedTrees:
    """Tests for balls in the infinite regular tree."""

    @pytest.mark.parametrize(
        ("r", "depth", "size"), [(3, 0, 1), (3, 2, 10), (4, 3, 53), (3, 3, 22)]
    )
    def test_sizes(self, r, depth, size):
        """Test vertex counts of truncated trees."""
        g, root = truncated_tree(r, depth)

        assert g.n == size
        assert root == 0
        assert g.edge_count == size - 1

    def test_root_and_internal_degrees(self):
        """Test interior vertices have degree r and leaves degree 1."""
        g, root = truncated_tree(3, 3)

        assert g.degree(root) == 3
        assert all(g.degree(v) == 3 for v in range(1, 10))
        assert all(g.degree(v) == 1 for v in range(10, 22))

    def test_edge_tree(self):
        """Test the double ball around an edge."""
        g, (u, v) = truncated_edge_tree(3, 2)

        assert g.n == 14
        assert v in g.neighbors(u)
        assert g.degree(u) == g.degree(v) == 3
        assert girth(g) == math.inf

    def test_invalid_arguments(self):
        """Test degree and depth validation."""
        with pytest.raises(InvalidArgumentError):
            truncated_tree(1, 2)
        with pytest.raises(InvalidArgumentError):
            truncated_edge_tree(3, -1)


class TestGraphFiles:
    """Tests for the graph text format."""

    def test_write_and_read(self, tmp_path):
        """Test a graph survives a file round trip."""
        g = fixture("heawood")
        target = write_graph(g, tmp_path / "out" / "heawood.txt")

        assert read_graph(target) == g
        assert target.read_text(encoding="utf-8").splitlines()[0] == "14 21"

    def test_edge_count_mismatch(self, tmp_path):
        """Test the header edge count is checked."""
        target = tmp_path / "bad.txt"
        target.write_text("3 2\n0 1\n", encoding="utf-8")

        with pytest.raises(InvalidArgumentError):
            read_graph(target)

    def test_garbage(self, tmp_path):
        """Test unreadable content is an invalid argument."""
        target = tmp_path / "bad.txt"
        target.write_text("three vertices\n", encoding="utf-8")

        with pytest.raises(InvalidArgumentError):
            read_graph(target)


class TestFixtures:
    """Tests for named fixtures."""

    @pytest.mark.parametrize(
        ("name", "n", "g"), [("petersen", 10, 5), ("heawood", 14, 6), ("mcgee", 24, 7)]
    )
    def test_fixture_girths(self, name, n, g):
        """Test vertex counts, cubic degree and girth."""
        graph = fixture(name)

        assert graph.n == n
        assert graph.is_regular(3)
        assert girth(graph) == g

    def test_names(self):
        """Test every listed name resolves."""
        for name in FIXTURE_NAMES:
            assert fixture(name).n > 0

    def test_unknown_fixture(self):
        """Test unknown names are rejected."""
        with pytest.raises(InvalidArgumentError):
            fixture("foo")
