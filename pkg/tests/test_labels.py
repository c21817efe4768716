"""Tests for the label process."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from induced_forest.core.errors import InvalidArgumentError
from induced_forest.core.fixtures import fixture
from induced_forest.core.graph import Graph, generate_regular, truncated_tree
from induced_forest.oracle.checks import label_distribution, sequential_distribution
from induced_forest.process.labels import (
    NO_LABEL,
    Color,
    LabelSchedule,
    coloring_at,
    relevant_label_array,
    relevant_labels,
    sample_labels,
)


def schedule(horizon: int, label_sets: list[set[int]]) -> LabelSchedule:
    return LabelSchedule.from_label_sets(horizon, 0.5, 0.5, label_sets)


def star(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, k) for k in range(1, leaves + 1)])


@st.composite
def labelled_graphs(draw):
    """Small random regular graph with a label schedule."""
    r = draw(st.sampled_from([3, 4]))
    n = draw(st.sampled_from([8, 10, 12]))
    horizon = draw(st.integers(min_value=0, max_value=5))
    p0 = draw(st.floats(min_value=0.01, max_value=0.9))
    p = draw(st.floats(min_value=0.0, max_value=0.9))
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    g = generate_regular(n, r, seed)
    return g, sample_labels(n, horizon, p0, p, seed)


class TestSampleLabels:
    """Tests for label sampling."""

    def test_certain_zero_label(self):
        """Test p0=1, p=0 gives every vertex exactly {0}."""
        sched = sample_labels(20, 4, 1.0, 0.0, seed=3)

        assert all(sched.labels(v) == [0] for v in range(20))

    def test_tiny_p0_is_almost_surely_empty(self):
        """Test p0=1e-9 and p=0 leaves every set empty at desk scale."""
        sched = sample_labels(100, 3, 1e-9, 0.0, seed=1)

        assert not sched.held.any()

    def test_deterministic(self):
        """Test equal seeds give equal schedules."""
        a = sample_labels(50, 5, 0.3, 0.2, seed=9)
        b = sample_labels(50, 5, 0.3, 0.2, seed=9)

        assert np.array_equal(a.held, b.held)

    @pytest.mark.parametrize(("p0", "p"), [(0.0, 0.1), (1.5, 0.1), (0.2, 1.0), (0.2, -0.1)])
    def test_invalid_probabilities(self, p0, p):
        """Test probability validation."""
        with pytest.raises(InvalidArgumentError):
            sample_labels(10, 2, p0, p, seed=0)

    def test_frequencies(self):
        """Test label frequencies match their probabilities."""
        sched = sample_labels(20000, 2, 0.3, 0.1, seed=5)
        rates = sched.held.mean(axis=1)

        assert rates[0] == pytest.approx(0.3, abs=0.015)
        assert rates[1] == pytest.approx(0.1, abs=0.01)
        assert rates[2] == pytest.approx(0.1, abs=0.01)

    def test_schedule_is_read_only(self):
        """Test the membership matrix cannot be modified."""
        sched = sample_labels(5, 1, 0.5, 0.5, seed=0)

        with pytest.raises(ValueError):
            sched.held[0, 0] = True

    def test_from_label_sets_checks_range(self):
        """Test explicit labels must lie within the horizon."""
        with pytest.raises(InvalidArgumentError):
            schedule(1, [{2}])


class TestRelevantLabels:
    """Tests for relevant label assignment."""

    def test_zero_label_always_relevant(self):
        """Test label 0 is relevant regardless of neighbours."""
        g = Graph.from_edges(2, [(0, 1)])
        rl = relevant_labels(g, schedule(1, [{0, 1}, {0}]))

        assert rl.value(0) == 0
        assert rl.value(1) == 0

    def test_single_earlier_neighbour(self):
        """Test a vertex gains label 1 next to one label-0 neighbour."""
        g = Graph.from_edges(2, [(0, 1)])
        rl = relevant_labels(g, schedule(1, [{0}, {1}]))

        assert rl.value(1) == 1
        assert rl.up_to(0) == frozenset({0})
        assert rl.up_to(1) == frozenset({0, 1})

    def test_two_earlier_neighbours(self):
        """Test two label-0 neighbours block label 1."""
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        rl = relevant_labels(g, schedule(1, [{0}, {1}, {0}]))

        assert rl.value(1) is None
        assert coloring_at(g, rl, 1).color_of(1) is Color.ORANGE

    def test_later_label_used_when_earlier_blocked(self):
        """Test a vertex can become relevant at a later label."""
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        rl = relevant_labels(g, schedule(2, [{0}, {1}, {1, 2}]))

        assert rl.value(1) == 1
        assert rl.value(2) == 2

    def test_without_any_neighbour_fired(self):
        """Test label i >= 1 needs exactly one neighbour with a smaller label."""
        g = Graph.from_edges(2, [(0, 1)])
        rl = relevant_labels(g, schedule(2, [{1, 2}, set()]))

        assert rl.value(0) is None

    def test_size_mismatch(self):
        """Test a schedule must cover the graph."""
        with pytest.raises(InvalidArgumentError):
            relevant_labels(Graph.from_edges(2, [(0, 1)]), schedule(0, [{0}]))

    def test_batched_kernel_matches_single(self):
        """Test a stacked batch gives the same labels as one schedule at a time."""
        g = fixture("petersen")
        schedules = [sample_labels(g.n, 4, 0.2, 0.3, seed) for seed in range(8)]
        batch = np.stack([s.held for s in schedules], axis=2)

        stacked = relevant_label_array(g.adjacency_matrix, batch)

        for k, sched in enumerate(schedules):
            assert np.array_equal(stacked[:, k], relevant_labels(g, sched).values)

    @pytest.mark.property
    @settings(max_examples=60, deadline=None)
    @given(labelled_graphs())
    def test_definition_holds(self, case):
        """Test every relevant label satisfies the inductive definition."""
        g, sched = case
        rl = relevant_labels(g, sched)

        for v in range(g.n):
            label = rl.value(v)
            if sched.held[0, v]:
                assert label == 0
                continue
            if label is None:
                continue
            assert sched.held[label, v]
            earlier = [u for u in g.neighbors(v) if rl.values[u] != NO_LABEL
                       and rl.values[u] < label]
            assert len(earlier) == 1

    @pytest.mark.property
    @settings(max_examples=60, deadline=None)
    @given(labelled_graphs())
    def test_blue_before_relevant(self, case):
        """Test a vertex with relevant label i >= 1 was blue at time i-1."""
        g, sched = case
        rl = relevant_labels(g, sched)

        for v in range(g.n):
            label = rl.value(v)
            if label is not None and label >= 1:
                assert coloring_at(g, rl, label - 1).color_of(v) is Color.BLUE


class TestColoring:
    """Tests for colourings."""

    def test_no_relevant_labels_all_white(self):
        """Test an empty labelling colours everything white."""
        g = fixture("petersen")
        rl = relevant_labels(g, schedule(0, [set()] * g.n))

        assert coloring_at(g, rl, 0).vertices(Color.WHITE) == frozenset(range(g.n))

    def test_star_leaves_blue(self):
        """Test leaves of a purple centre are blue."""
        g = star(4)
        state = coloring_at(g, relevant_labels(g, schedule(0, [{0}, *([set()] * 4)])), 0)

        assert state.color_of(0) is Color.PURPLE
        assert state.vertices(Color.BLUE) == frozenset({1, 2, 3, 4})

    def test_two_purple_neighbours_orange(self):
        """Test two purple neighbours make a vertex orange."""
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        state = coloring_at(g, relevant_labels(g, schedule(0, [{0}, set(), {0}])), 0)

        assert state.as_tuple() == (Color.PURPLE, Color.ORANGE, Color.PURPLE)

    def test_time_range(self):
        """Test the time must lie within the horizon."""
        g = Graph.from_edges(2, [(0, 1)])
        rl = relevant_labels(g, schedule(1, [set(), set()]))

        with pytest.raises(InvalidArgumentError):
            coloring_at(g, rl, 2)

    @pytest.mark.parametrize("seed", range(5))
    def test_monotone_in_time(self, seed):
        """Test purple grows and white shrinks with time."""
        g = generate_regular(60, 3, seed)
        rl = relevant_labels(g, sample_labels(g.n, 6, 0.1, 0.3, seed))
        states = [coloring_at(g, rl, time) for time in range(7)]

        for before, after in zip(states, states[1:]):
            assert before.vertices(Color.PURPLE) <= after.vertices(Color.PURPLE)
            assert before.vertices(Color.WHITE) >= after.vertices(Color.WHITE)

    @pytest.mark.parametrize("seed", range(10))
    def test_locality(self, seed):
        """Test labels at distance >= i+2 never change the root colour at time i."""
        i = 1
        g, root = truncated_tree(3, i + 3)
        near = 1 + 3 + 6
        base = sample_labels(g.n, i, 0.3, 0.4, seed)
        other = sample_labels(g.n, i, 0.3, 0.4, seed + 1000)
        mixed = base.held.copy()
        mixed[:, near:] = other.held[:, near:]
        perturbed = LabelSchedule(horizon=i, p0=0.3, p=0.4, held=mixed)

        colour = coloring_at(g, relevant_labels(g, base), i).color_of(root)
        moved = coloring_at(g, relevant_labels(g, perturbed), i).color_of(root)

        assert colour is moved


class TestDummyChoices:
    """Tests that label sets reproduce the step-by-step algorithm."""

    @pytest.mark.parametrize(("p0", "p"), [(0.2, 0.1), (0.5, 0.5), (0.3, 0.9)])
    def test_path_of_three(self, p0, p):
        """Test colouring laws agree on a path of three vertices with one step."""
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        labelled = label_distribution(g, 1, p0, p)
        stepped = sequential_distribution(g, 1, p0, p)

        assert labelled.keys() == stepped.keys()
        for coloring, prob in labelled.items():
            assert prob == pytest.approx(stepped[coloring], abs=1e-12)
        assert sum(labelled.values()) == pytest.approx(1.0, abs=1e-12)

    def test_two_steps_on_star(self):
        """Test the laws also agree over two steps on a star."""
        g = star(3)
        labelled = label_distribution(g, 2, 0.3, 0.4)
        stepped = sequential_distribution(g, 2, 0.3, 0.4)

        assert labelled.keys() == stepped.keys()
        for coloring, prob in labelled.items():
            assert prob == pytest.approx(stepped[coloring], abs=1e-12)
