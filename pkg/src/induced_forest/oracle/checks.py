"""Oracle checks of the recurrence formulas and the independence properties."""

from __future__ import annotations

import itertools
import logging
import math
from collections import defaultdict
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from induced_forest.analysis.recurrence import iterate
from induced_forest.analysis.state import KineticState, TrajectoryMode, initial_state
from induced_forest.core.errors import BudgetExceededError, InvalidArgumentError
from induced_forest.core.graph import Graph, truncated_edge_tree, truncated_tree
from induced_forest.oracle.enumeration import (
    DEFAULT_BUDGET,
    BallMode,
    Distribution,
    EnumerationSpec,
    LabelBatch,
    assignment_count,
    distribution,
    exact_distribution,
    exact_single,
    mc_pair,
)
from induced_forest.process.labels import NO_LABEL, Color, color_array

logger = logging.getLogger(__name__)

EXACT_TOLERANCE = 1e-12
Z_LIMIT = 4.0
DEFAULT_SAMPLES = 1_000_000

WHITE, BLUE = int(Color.WHITE), int(Color.BLUE)


@dataclass(frozen=True)
class Comparison:
    """One measured quantity against its formula."""
    label: str
    measured: float
    expected: float
    stderr: float | None = None

    @property
    def error(self) -> float:
        """Absolute difference between measured and expected."""
        return abs(self.measured - self.expected)

    @property
    def z(self) -> float | None:
        """Error in standard errors; None for exact comparisons."""
        if self.stderr is None:
            return None
        if self.stderr == 0.0:
            return 0.0 if self.error == 0.0 else math.inf
        return self.error / self.stderr

    @property
    def passed(self) -> bool:
        """Within EXACT_TOLERANCE when exact, within Z_LIMIT standard errors otherwise."""
        z = self.z
        return self.error <= EXACT_TOLERANCE if z is None else z <= Z_LIMIT


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one oracle check."""
    name: str
    comparisons: tuple[Comparison, ...]
    details: dict[str, Any] = field(default_factory=dict)
    skipped: bool = False

    @property
    def passed(self) -> bool:
        """True when every comparison passed."""
        return all(c.passed for c in self.comparisons)

    @property
    def method(self) -> str:
        """Either exact, monte-carlo or mixed, by how the comparisons were measured."""
        kinds = {c.stderr is None for c in self.comparisons}
        if kinds == {True}:
            return "exact"
        return "monte-carlo" if kinds == {False} else "mixed"

    @property
    def max_error(self) -> float:
        """Largest absolute error over the comparisons."""
        return max((c.error for c in self.comparisons), default=0.0)

    @property
    def max_z(self) -> float | None:
        """Largest z-score among the sampled comparisons, if any."""
        zs = [c.z for c in self.comparisons if c.z is not None]
        return max(zs) if zs else None

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary."""
        return {
            "check": self.name,
            "method": self.method,
            "passed": self.passed,
            "skipped": self.skipped,
            "max_error": self.max_error,
            "max_z": self.max_z,
            "tolerance": {"exact": EXACT_TOLERANCE, "z": Z_LIMIT},
            "comparisons": [
                {
                    "label": c.label,
                    "measured": c.measured,
                    "expected": c.expected,
                    "stderr": c.stderr,
                }
                for c in self.comparisons
            ],
            "details": self.details,
        }


@dataclass(frozen=True)
class OracleParams:
    """Parameters shared by every check."""
    r: int
    i: int
    p0: float
    p: float
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    budget: int = DEFAULT_BUDGET

    def __post_init__(self) -> None:
        EnumerationSpec(self.r, self.i, self.p0, self.p)
        if self.samples < 1:
            raise InvalidArgumentError(f"samples must be at least 1, got {self.samples}")

    def state_before(self) -> KineticState:
        """Recurrence state at time i - 1."""
        if self.i < 1:
            raise InvalidArgumentError(f"transition checks need i >= 1, got {self.i}")
        return iterate(self.r, self.p0, self.p, self.i - 1, TrajectoryMode.EXACT).states[-1]


def _compare(
    dist: Distribution, name: str, label: str, event: int, given: list[int], expected: float
) -> Comparison | None:
    measured = dist.conditional(name, event, given)
    if measured is None:
        logger.info("Skipping %s: conditioning event has probability zero", label)
        return None
    value, stderr = measured
    return Comparison(label, value, expected, stderr)


def _transition_codes(batch: LabelBatch, i: int, vertices: tuple[int, ...]) -> np.ndarray:
    """Base-4 code of the colours of ``vertices`` at i - 1 followed by those at i."""
    code = np.zeros(batch.size, dtype=np.int64)
    for time in (i - 1, i):
        colors = batch.colors(time).astype(np.int64)
        for v in vertices:
            code = 4 * code + colors[v]
    return code


def check_initial(params: OracleParams) -> CheckResult:
    """Closed-form initial state: exact w, b and Monte-Carlo q, s, t."""
    expected = initial_state(params.r, params.p0)
    w, b = exact_single(EnumerationSpec(params.r, 0, params.p0, params.p), budget=params.budget)
    pair = mc_pair(
        EnumerationSpec(params.r, 0, params.p0, params.p, BallMode.PAIR),
        params.samples,
        params.seed,
    )
    return CheckResult(
        name="initial",
        comparisons=(
            Comparison("w", w, expected.w),
            Comparison("b", b, expected.b),
            Comparison("q", pair.q, expected.q, pair.q_err),
            Comparison("s", pair.s, expected.s, pair.s_err),
            Comparison("t", pair.t, expected.t, pair.t_err),
        ),
    )


def check_step(params: OracleParams) -> CheckResult:
    """Recurrence state at time i against the tree (exact w, b; sampled q, s, t)."""
    expected = iterate(params.r, params.p0, params.p, params.i, TrajectoryMode.EXACT).states[-1]
    graph, root = truncated_tree(params.r, params.i + 1)

    def observe(batch: LabelBatch) -> dict[str, np.ndarray]:
        return {"root": batch.colors(params.i)[root].astype(np.int64)}

    dist = distribution(
        graph, params.i, params.p0, params.p, observe,
        budget=params.budget, samples=params.samples, seed=params.seed,
    )
    comparisons = []
    for label, color in (("w", WHITE), ("b", BLUE)):
        value = dist.prob("root", color)
        stderr = None if dist.exact else math.sqrt(value * (1 - value) / params.samples)
        comparisons.append(Comparison(label, value, getattr(expected, label), stderr))
    pair = mc_pair(
        EnumerationSpec(params.r, params.i, params.p0, params.p, BallMode.PAIR),
        params.samples,
        params.seed,
    )
    comparisons += [
        Comparison("q", pair.q, expected.q, pair.q_err),
        Comparison("s", pair.s, expected.s, pair.s_err),
        Comparison("t", pair.t, expected.t, pair.t_err),
    ]
    return CheckResult(name="step", comparisons=tuple(comparisons))


def _single_transitions(params: OracleParams) -> Distribution:
    graph, root = truncated_tree(params.r, params.i + 1)

    def observe(batch: LabelBatch) -> dict[str, np.ndarray]:
        return {"root": _transition_codes(batch, params.i, (root,))}

    return distribution(
        graph, params.i, params.p0, params.p, observe,
        budget=params.budget, samples=params.samples, seed=params.seed,
    )


def _given(*before: int) -> list[int]:
    """Every transition code whose earlier colours are ``before``."""
    prefix = 0
    for color in before:
        prefix = 4 * prefix + color
    width = 4 ** len(before)
    return [prefix * width + rest for rest in range(width)]


def _code(before: tuple[int, ...], after: tuple[int, ...]) -> int:
    code = 0
    for color in (*before, *after):
        code = 4 * code + color
    return code


def check_cor42(params: OracleParams) -> CheckResult:
    """White vertex transitions: stays white, or turns blue."""
    r, p = params.r, params.p
    w, _, _, s, _ = params.state_before()
    stay_white = 1 - p * s / w
    dist = _single_transitions(params)
    rows = [
        _compare(dist, "root", "W->W", _code((WHITE,), (WHITE,)), _given(WHITE), stay_white**r),
        _compare(dist, "root", "W->B", _code((WHITE,), (BLUE,)), _given(WHITE),
                 r * p * s / w * stay_white ** (r - 1)),
    ]
    return _result("cor42", rows)


def check_cor43(params: OracleParams) -> CheckResult:
    """Blue vertex stays blue."""
    r, p = params.r, params.p
    _, b, _, _, t = params.state_before()
    stay_blue = 1 - r * p * t / ((r - 1) * b)
    dist = _single_transitions(params)
    rows = [
        _compare(dist, "root", "B->B", _code((BLUE,), (BLUE,)), _given(BLUE),
                 (1 - p) * stay_blue ** (r - 1)),
    ]
    return _result("cor43", rows)


def check_cor44(params: OracleParams, *, prefer_exact: bool = False) -> CheckResult:
    """The six transitions of an edge's end colours."""
    r, p = params.r, params.p
    w, b, _, s, t = params.state_before()
    a = 1 - p * s / w
    c = 1 - r * p * t / ((r - 1) * b)
    graph, ends = truncated_edge_tree(r, params.i + 1)

    def observe(batch: LabelBatch) -> dict[str, np.ndarray]:
        return {"pair": _transition_codes(batch, params.i, ends)}

    dist = distribution(
        graph, params.i, params.p0, p, observe,
        budget=params.budget, samples=params.samples, seed=params.seed,
        prefer_exact=prefer_exact,
    )
    ww, wb, bb = (WHITE, WHITE), (WHITE, BLUE), (BLUE, BLUE)
    formulas = [
        ("WW->WW", ww, ww, a ** (2 * r - 2)),
        ("WW->WB", ww, wb, (r - 1) * p * s / w * a ** (2 * r - 3)),
        ("WW->BB", ww, bb, (r - 1) ** 2 * p**2 * s**2 / w**2 * a ** (2 * r - 4)),
        ("WB->WB", wb, wb, (1 - p) * a ** (r - 1) * c ** (r - 2)),
        ("WB->BB", wb, bb, (r - 1) * p * (1 - p) * s / w * a ** (r - 2) * c ** (r - 2)),
        ("BB->BB", bb, bb, (1 - p) ** 2 * c ** (2 * r - 4)),
    ]
    rows = [
        _compare(dist, "pair", label, _code(before, after), _given(*before), expected)
        for label, before, after, expected in formulas
    ]
    return _result("cor44", rows)


def _result(name: str, rows: list[Comparison | None], **details: Any) -> CheckResult:
    kept = tuple(row for row in rows if row is not None)
    return CheckResult(name=name, comparisons=kept, details=details, skipped=not kept)


def _factorization(dist: Distribution, members: int, label: str) -> list[Comparison]:
    """Joint probability of all A_j, j in J, against the product of the marginals.

    Category m of ``masks`` is the set of j with A_j, as a bit mask.
    """
    values = dist.probabilities.get("masks", np.zeros(0))
    full = np.zeros(1 << members)
    full[: values.size] = values
    p_given = math.fsum(full)
    if p_given <= 0.0:
        return []
    n_given = None if dist.samples is None else dist.samples * p_given

    def holds(subset: int) -> float:
        return math.fsum(full[m] for m in range(full.size) if m & subset == subset) / p_given

    comparisons = []
    for subset in range(1, 1 << members):
        joint = holds(subset)
        singles = [holds(1 << j) for j in range(members) if subset >> j & 1]
        product = math.prod(singles)
        stderr = None
        if n_given is not None:
            var_joint = joint * (1 - joint) / n_given
            var_product = product**2 * sum((1 - q) / (q * n_given) for q in singles if q > 0)
            stderr = math.sqrt(var_joint + var_product)
        members_of = [j + 1 for j in range(members) if subset >> j & 1]
        comparisons.append(Comparison(f"{label}{members_of}", joint, product, stderr))
    return comparisons


def check_cor41(params: OracleParams) -> CheckResult:
    """Neighbours avoiding label i factorise, given a white or a blue centre.

    White part: u white at i - 1, A_j = {v_j has no relevant label i} for all
    neighbours. Blue part: u blue at i - 1 with v_1 purple, J among the
    other neighbours. Exact when the budget allows, Monte-Carlo otherwise.
    """
    if params.i < 1:
        raise InvalidArgumentError(f"cor41 needs i >= 1, got {params.i}")
    graph, root = truncated_tree(params.r, params.i + 1)
    neighbours = graph.neighbors(root)
    others = neighbours[1:]

    def masks(batch: LabelBatch, group: tuple[int, ...], given: np.ndarray) -> np.ndarray:
        code = np.zeros(batch.size, dtype=np.int64)
        for j, v in enumerate(group):
            code |= (batch.relevant[v] != params.i).astype(np.int64) << j
        return np.where(given, code, -1)

    def observe_white(batch: LabelBatch) -> dict[str, np.ndarray]:
        given = batch.colors(params.i - 1)[root] == Color.WHITE
        return {"masks": masks(batch, neighbours, given)}

    def observe_blue(batch: LabelBatch) -> dict[str, np.ndarray]:
        given = (batch.colors(params.i - 1)[root] == Color.BLUE) & batch.fired_by(params.i - 1)[
            neighbours[0]
        ]
        return {"masks": masks(batch, others, given)}

    rows: list[Comparison] = []
    for label, observe, group in (("white", observe_white, neighbours),
                                  ("blue", observe_blue, others)):
        dist = distribution(
            graph, params.i, params.p0, params.p, observe,
            budget=params.budget, samples=params.samples, seed=params.seed,
        )
        rows += _factorization(dist, len(group), f"{label}:J=")
    return CheckResult(name="cor41", comparisons=tuple(rows), skipped=not rows)


def _branch(graph: Graph, root: int, child: int) -> tuple[int, ...]:
    """``child`` followed by its own children, away from ``root``."""
    return (child, *(v for v in graph.neighbors(child) if v != root))


def check_independence(params: OracleParams) -> CheckResult:
    """Colourings of the root's branches are pairwise independent given a white root at time i.

    Branch colourings cover the first two levels below the root; every pair
    of the r branches is compared. The ball has radius i + 2 when that fits
    the budget and i + 1 (at least 2) otherwise; independence holds on
    every finite tree.
    """
    radius = params.i + 2
    if _tree_assignments(params.r, radius, params.i) > params.budget:
        radius = max(params.i + 1, 2)
        logger.info("Independence check falls back to radius %d", radius)
    graph, root = truncated_tree(params.r, radius)
    branches = [_branch(graph, root, v) for v in graph.neighbors(root)]
    codes = 4 ** len(branches[0])
    pairs = list(itertools.combinations(range(len(branches)), 2))

    def branch_code(colors: np.ndarray, branch: tuple[int, ...]) -> np.ndarray:
        code = np.zeros(colors.shape[1], dtype=np.int64)
        for v in branch:
            code = 4 * code + colors[v]
        return code

    def observe(batch: LabelBatch) -> dict[str, np.ndarray]:
        colors = batch.colors(params.i).astype(np.int64)
        white = colors[root] == Color.WHITE
        per_branch = [branch_code(colors, branch) for branch in branches]
        return {
            f"{a},{b}": np.where(white, per_branch[a] * codes + per_branch[b], -1)
            for a, b in pairs
        }

    dist = exact_distribution(graph, params.i, params.p0, params.p, observe, budget=params.budget)
    details: dict[str, Any] = {"radius": radius, "branch_pairs": len(pairs)}
    rows: list[Comparison] = []
    for a, b in pairs:
        values = dist.probabilities.get(f"{a},{b}", np.zeros(0))
        table = np.zeros(codes * codes)
        table[: values.size] = values
        table = table.reshape(codes, codes)
        p_white = math.fsum(table.ravel())
        if p_white <= 0.0:
            logger.info("Root is never white at time %d; independence check skipped", params.i)
            return CheckResult(name="independence", comparisons=(), details=details, skipped=True)
        conditional = table / p_white
        left = conditional.sum(axis=1)
        right = conditional.sum(axis=0)
        rows += [
            Comparison(
                f"X{a + 1}={x1},X{b + 1}={x2}",
                float(conditional[x1, x2]),
                float(left[x1] * right[x2]),
            )
            for x1, x2 in itertools.product(np.flatnonzero(left), np.flatnonzero(right))
        ]
    details["pairs_checked"] = len(rows)
    return CheckResult(name="independence", comparisons=tuple(rows), details=details)


def _tree_assignments(r: int, radius: int, horizon: int) -> int:
    graph, _ = truncated_tree(r, radius)
    return assignment_count(graph.n, horizon)


def label_distribution(
    g: Graph, N: int, p0: float, p: float, *, budget: int = DEFAULT_BUDGET
) -> dict[tuple[int, ...], float]:
    """Exact distribution of the time-N colouring under the label model."""

    def observe(batch: LabelBatch) -> dict[str, np.ndarray]:
        colors = batch.colors(N).astype(np.int64)
        code = np.zeros(batch.size, dtype=np.int64)
        for v in range(g.n):
            code = 4 * code + colors[v]
        return {"coloring": code}

    dist = exact_distribution(g, N, p0, p, observe, budget=budget)
    result = {}
    for code, prob in enumerate(dist.probabilities["coloring"]):
        if prob > 0.0:
            digits = np.base_repr(code, 4).zfill(g.n)
            result[tuple(int(d) for d in digits)] = float(prob)
    return result


def sequential_distribution(
    g: Graph, N: int, p0: float, p: float, *, budget: int = DEFAULT_BUDGET
) -> dict[tuple[int, ...], float]:
    """Exact distribution of the time-N colouring from the algorithm's own choices.

    Every phase-1 subset and every subset of blue vertices picked at each
    step is enumerated with its probability.
    """
    if assignment_count(g.n, N) > budget:
        raise BudgetExceededError(
            f"sequential enumeration on {g.n} vertices over {N} steps exceeds the budget",
            size=assignment_count(g.n, N),
            budget=budget,
        )
    adjacency = g.adjacency_matrix
    result: defaultdict[tuple[int, ...], float] = defaultdict(float)

    def extend(added: np.ndarray, step: int, weight: float) -> None:
        if weight == 0.0:
            return
        if step > N:
            result[tuple(int(c) for c in color_array(adjacency, added, N))] += weight
            return
        blue = np.flatnonzero(color_array(adjacency, added, step - 1) == Color.BLUE)
        for picks in itertools.product((False, True), repeat=blue.size):
            chosen = blue[list(picks)] if blue.size else blue
            nxt = added.copy()
            nxt[chosen] = step
            extend(nxt, step + 1, weight * math.prod(p if c else 1 - p for c in picks))

    for start in itertools.product((False, True), repeat=g.n):
        added = np.where(start, 0, NO_LABEL).astype(np.int64)
        extend(added, 1, math.prod(p0 if c else 1 - p0 for c in start))
    return {coloring: prob for coloring, prob in result.items() if prob > 0.0}


def check_sequential(params: OracleParams, g: Graph | None = None) -> CheckResult:
    """Label model and step-by-step algorithm give the same time-i colouring law.

    Runs on a path of three vertices unless another small graph is given.
    """
    g = g or Graph.from_edges(3, [(0, 1), (1, 2)])
    labelled = label_distribution(g, params.i, params.p0, params.p, budget=params.budget)
    stepped = sequential_distribution(g, params.i, params.p0, params.p, budget=params.budget)
    rows = [
        Comparison("".join(str(c) for c in coloring), labelled.get(coloring, 0.0),
                   stepped.get(coloring, 0.0))
        for coloring in sorted(labelled.keys() | stepped.keys())
    ]
    return CheckResult(name="sequential", comparisons=tuple(rows), details={"n": g.n})


CHECKS: dict[str, Callable[[OracleParams], CheckResult]] = {
    "initial": check_initial,
    "step": check_step,
    "independence": check_independence,
    "cor41": check_cor41,
    "cor42": check_cor42,
    "cor43": check_cor43,
    "cor44": check_cor44,
    "sequential": check_sequential,
}


def run_check(name: str, params: OracleParams) -> CheckResult:
    """Run the named check."""
    try:
        check = CHECKS[name]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown check {name!r}, expected one of {', '.join(CHECKS)}"
        ) from None
    logger.info("Running oracle check %s for r=%d, i=%d", name, params.r, params.i)
    return check(params)
