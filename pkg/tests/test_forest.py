"""Tests for the forest-growing algorithm."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from induced_forest.core.errors import InvalidArgumentError
from induced_forest.core.fixtures import fixture
from induced_forest.core.graph import Graph, generate_regular, girth, induced_is_acyclic
from induced_forest.process.forest import (
    AlgorithmParams,
    harvest,
    prune_same_step,
    repair,
    run,
    run_sequential,
)
from induced_forest.process.labels import Color, LabelSchedule, relevant_labels, sample_labels


def cycle_edges(n: int, start: int = 0) -> list[tuple[int, int]]:
    return [(start + k, start + (k + 1) % n) for k in range(n)]


def labelled(g: Graph, horizon: int, label_sets: list[set[int]]):
    return relevant_labels(g, LabelSchedule.from_label_sets(horizon, 0.5, 0.5, label_sets))


class TestAlgorithmParams:
    """Tests for parameter validation."""

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"N": -1, "p0": 0.2, "p": 0.1},
            {"N": 1, "p0": 0.0, "p": 0.1},
            {"N": 1, "p0": 0.2, "p": 1.0},
            {"N": 1, "p0": 0.2, "p": 0.1, "seed": -5},
            {"N": 1, "p0": 0.2, "p": 0.1, "seed": 2**64},
        ],
    )
    def test_invalid(self, kwargs):
        """Test invalid parameters are rejected."""
        with pytest.raises(InvalidArgumentError):
            AlgorithmParams(**kwargs)

    def test_with_seed(self):
        """Test reseeding keeps the other parameters."""
        params = AlgorithmParams(N=3, p0=0.2, p=0.1, seed=1).with_seed(9)

        assert params.to_dict() == {"N": 3, "p0": 0.2, "p": 0.1, "seed": 9}


class TestPruneSameStep:
    """Tests for phase-3 pruning."""

    def test_no_clash_keeps_all(self):
        """Test P-bar = P when no neighbours share a label."""
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        rl = labelled(g, 1, [{0}, {1}, set()])

        assert prune_same_step(g, rl) == frozenset({0, 1})

    def test_same_label_pair_removed(self):
        """Test both ends of a label-0 edge are removed."""
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        rl = labelled(g, 0, [{0}, {0}, set()])

        assert prune_same_step(g, rl) == frozenset()

    def test_all_zero_labels_connected(self):
        """Test p0=1 on a connected graph leaves nothing."""
        g = fixture("petersen")
        rl = labelled(g, 0, [{0}] * g.n)

        assert prune_same_step(g, rl) == frozenset()

    def test_later_step_clash(self):
        """Test a label-1 clash removes only its two ends."""
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        rl = labelled(g, 1, [{0}, {1}, {1}, {0}])

        assert rl.value(1) == rl.value(2) == 1
        assert prune_same_step(g, rl) == frozenset({0, 3})


class TestRepair:
    """Tests for the repair pass."""

    def test_acyclic_candidate(self):
        """Test nothing is removed from a forest."""
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])

        kept, removed = repair(g, frozenset(range(4)))

        assert removed == frozenset()
        assert kept == frozenset(range(4))

    def test_triangle(self):
        """Test one vertex of a triangle is removed, the lowest index on ties."""
        g = Graph.from_edges(3, cycle_edges(3))

        kept, removed = repair(g, frozenset(range(3)))

        assert removed == frozenset({0})
        assert kept == frozenset({1, 2})

    def test_two_four_cycles(self):
        """Test two disjoint 4-cycles lose exactly one vertex each."""
        g = Graph.from_edges(8, [*cycle_edges(4), *cycle_edges(4, start=4)])

        kept, removed = repair(g, frozenset(range(8)))

        assert len(removed) == 2
        assert induced_is_acyclic(g, kept)

    def test_highest_degree_first(self):
        """Test the hub of two triangles sharing a vertex is removed alone."""
        g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])

        _, removed = repair(g, frozenset(range(5)))

        assert removed == frozenset({2})


class TestRun:
    """Tests for full runs."""

    def test_certain_zero_label(self):
        """Test p0=1 leaves nothing on a connected graph."""
        g = fixture("petersen")

        result = run(g, AlgorithmParams(N=2, p0=1.0, p=0.3, seed=4))

        assert result.pruned_purple == frozenset()
        assert result.white == frozenset()
        assert result.forest == frozenset()
        assert result.purple == frozenset(range(g.n))

    @pytest.mark.parametrize("seed", range(5))
    def test_zero_p_matches_zero_steps(self, seed):
        """Test p=0 gives the same result as N=0."""
        g = generate_regular(100, 3, seed)

        later = run(g, AlgorithmParams(N=5, p0=0.2, p=0.0, seed=seed))
        immediate = run(g, AlgorithmParams(N=0, p0=0.2, p=0.0, seed=seed))

        assert later == immediate

    def test_deterministic(self):
        """Test equal seeds give equal results."""
        g = generate_regular(200, 4, 1)
        params = AlgorithmParams(N=10, p0=0.1, p=0.05, seed=77)

        assert run(g, params) == run(g, params)

    @pytest.mark.parametrize("seed", range(4))
    def test_set_relations(self, seed):
        """Test the subset relations between the returned sets."""
        g = generate_regular(300, 3, seed)
        result = run(g, AlgorithmParams(N=8, p0=0.15, p=0.1, seed=seed))

        assert result.pruned_purple <= result.purple
        assert result.harvested_white <= result.white
        assert result.forest == (result.pruned_purple | result.harvested_white) - (
            result.repairs_removed
        )
        assert induced_is_acyclic(g, result.forest)
        assert not result.purple & result.white

    def test_harvested_white_has_no_purple_neighbours(self):
        """Test W-bar never touches P."""
        g = generate_regular(300, 3, 12)
        result = run(g, AlgorithmParams(N=8, p0=0.15, p=0.1, seed=12))

        for v in result.harvested_white:
            assert not set(g.neighbors(v)) & result.purple

    @pytest.mark.parametrize(("name", "N"), [("petersen", 0), ("heawood", 0), ("mcgee", 1)])
    def test_no_repairs_at_large_girth(self, name, N):
        """Test fixtures with N <= ceil(g/2) - 3 never need repairs."""
        g = fixture(name)
        assert N <= -(-girth(g) // 2) - 3

        for seed in range(200):
            result = run(g, AlgorithmParams(N=N, p0=0.2, p=0.3, seed=seed))
            assert result.repairs_removed == frozenset()
            assert induced_is_acyclic(g, result.pruned_purple | result.harvested_white)

    @pytest.mark.slow
    @pytest.mark.parametrize("r", [3, 4])
    def test_random_graphs_need_few_repairs(self, r):
        """Test 100 random graphs on 2000 vertices give forests after under 2% repairs."""
        params = AlgorithmParams(N=20, p0=0.1, p=0.05)

        for seed in range(100):
            g = generate_regular(2000, r, seed)
            result = run(g, params.with_seed(seed))

            assert induced_is_acyclic(g, result.forest), seed
            assert len(result.repairs_removed) / g.n < 0.02, seed

    def test_json_record(self):
        """Test the simulate record schema."""
        g = fixture("mcgee")
        params = AlgorithmParams(N=1, p0=0.2, p=0.3, seed=5)

        record = run(g, params).to_json_dict(g, params)

        assert set(record) == {
            "n", "r", "params", "forest_size", "pbar_size", "wbar_size", "repairs", "fraction",
        }
        assert record["n"] == 24
        assert record["r"] == 3
        assert record["fraction"] == record["forest_size"] / 24

    @pytest.mark.property
    @settings(max_examples=40, deadline=None)
    @given(
        n=st.sampled_from([6, 8, 10, 20]),
        r=st.sampled_from([3, 4, 5]),
        N=st.integers(min_value=0, max_value=8),
        p0=st.floats(min_value=0.01, max_value=0.99),
        p=st.floats(min_value=0.0, max_value=0.99),
        seed=st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_forest_always_acyclic(self, n, r, N, p0, p, seed):
        """Test the output is a forest on any graph, low girth included."""
        g = generate_regular(n, r, seed)
        result = run(g, AlgorithmParams(N=N, p0=p0, p=p, seed=seed))

        assert induced_is_acyclic(g, result.forest)
        rl = relevant_labels(g, sample_labels(n, N, p0, p, seed))
        for u, v in g.edges():
            if u in result.pruned_purple and v in result.pruned_purple:
                assert rl.values[u] != rl.values[v]


class TestRunSequential:
    """Tests for the literal step-by-step algorithm."""

    def test_all_purple_at_start(self):
        """Test p0=1 colours every vertex purple in phase 1."""
        g = fixture("heawood")

        rl, state = run_sequential(g, AlgorithmParams(N=3, p0=1.0, p=0.5, seed=0))

        assert rl.up_to(0) == frozenset(range(g.n))
        assert state.vertices(Color.PURPLE) == frozenset(range(g.n))

    @pytest.mark.parametrize("seed", range(5))
    def test_harvest_gives_forest(self, seed):
        """Test the sequential colouring feeds the same harvesting."""
        g = generate_regular(200, 3, seed)
        rl, state = run_sequential(g, AlgorithmParams(N=6, p0=0.2, p=0.2, seed=seed))

        result = harvest(g, rl, state)

        assert induced_is_acyclic(g, result.forest)
        assert result.purple == state.vertices(Color.PURPLE)

    @pytest.mark.parametrize("seed", range(5))
    def test_added_only_when_blue(self, seed):
        """Test a vertex added at step i >= 1 has exactly one earlier purple neighbour."""
        g = generate_regular(200, 3, seed)
        rl, _ = run_sequential(g, AlgorithmParams(N=6, p0=0.2, p=0.3, seed=seed))

        for v in range(g.n):
            label = rl.value(v)
            if label:
                earlier = [u for u in g.neighbors(v)
                           if rl.value(u) is not None and rl.value(u) < label]
                assert len(earlier) == 1
