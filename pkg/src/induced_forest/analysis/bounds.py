"""Lower bound on the induced-forest fraction and its optimisation over p0."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, replace
from typing import Any

from induced_forest.analysis.ode_system import OdeSolution, integrate
from induced_forest.analysis.state import check_degree, check_p0
from induced_forest.core.errors import IntegrationError, InvalidArgumentError, OptimizationError
from induced_forest.core.settings import OdeOptions, SearchOptions

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

DEFAULT_MARGIN = 1e-6


@dataclass(frozen=True)
class SearchTrace:
    """Every evaluation made while optimising p0."""
    grid: tuple[tuple[float, float | None], ...]
    local_maxima: tuple[float, ...]
    refined: tuple[tuple[float, float], ...]
    boundary: str | None = None

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary."""
        return {
            "grid": [{"p0": p0, "xi": xi} for p0, xi in self.grid],
            "local_maxima": list(self.local_maxima),
            "refined": [{"p0": p0, "xi": xi} for p0, xi in self.refined],
            "boundary": self.boundary,
        }


@dataclass(frozen=True)
class BoundReport:
    """The bound at one p0 with its three summands."""
    r: int
    p0: float
    root_term: float
    integral_term: float
    white_term: float
    w_limit: float
    ratio_limit: float
    subcritical: bool
    x_stop: float
    trace: SearchTrace | None = None

    @property
    def xi(self) -> float:
        """Lower bound on the induced-forest fraction."""
        return self.root_term + self.integral_term + self.white_term

    @property
    def Xi(self) -> float:
        """Matching upper bound on the decycling fraction."""
        return 1.0 - self.xi

    def to_dict(self) -> dict[str, Any]:
        """Convert to the JSON record of ``bound`` and ``table``."""
        data: dict[str, Any] = {
            "r": self.r,
            "p0": self.p0,
            "xi": self.xi,
            "Xi": self.Xi,
            "subcritical": self.subcritical,
            "terms": {
                "root": self.root_term,
                "integral": self.integral_term,
                "white": self.white_term,
                "ratio_limit": self.ratio_limit,
            },
        }
        if self.trace is not None:
            data["trace"] = self.trace.to_dict()
        return data


def subcritical(sol: OdeSolution, margin: float = DEFAULT_MARGIN) -> bool:
    """True iff the limiting white branching ratio is below 1 - margin."""
    return sol.ratio_limit < 1.0 - margin


def xi_of_p0(
    r: int, p0: float, options: OdeOptions | None = None, margin: float = DEFAULT_MARGIN
) -> BoundReport:
    """Evaluate the bound at ``p0``; the white limit only counts when subcritical."""
    check_degree(r)
    check_p0(p0)
    sol = integrate(r, p0, options)
    is_subcritical = subcritical(sol, margin)
    return BoundReport(
        r=r,
        p0=p0,
        root_term=p0 * (1 - p0) ** r,
        integral_term=sol.b_integral,
        white_term=sol.w_limit if is_subcritical else 0.0,
        w_limit=sol.w_limit,
        ratio_limit=sol.ratio_limit,
        subcritical=is_subcritical,
        x_stop=sol.x_stop,
    )


def golden_section_max(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-5
) -> tuple[float, float]:
    """Golden-section search for a maximum of ``f`` on [a, b].

    Returns the best point evaluated and its value.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    mid = (a + b) / 2
    if h <= tol:
        return mid, f(mid)

    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)
    best = max((yc, c), (yd, d))
    for _ in range(n - 1):
        if yc > yd:
            b, d, yd = d, c, yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
            best = max(best, (yc, c))
        else:
            a, c, yc = c, d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)
            best = max(best, (yd, d))
    return best[1], best[0]


def _local_maxima(values: list[float | None]) -> list[int]:
    scores = [-math.inf if v is None else v for v in values]
    maxima = []
    for k, score in enumerate(scores):
        if score == -math.inf:
            continue
        left = scores[k - 1] if k > 0 else -math.inf
        right = scores[k + 1] if k + 1 < len(scores) else -math.inf
        if score > left and score >= right:
            maxima.append(k)
    return maxima


def search_boundary(p0: float, options: SearchOptions) -> str | None:
    """Which search cutoff ``p0`` lies within golden_tol of: "lower", "upper" or None."""
    if p0 - options.p0_floor <= options.golden_tol:
        return "lower"
    if options.p0_ceiling - p0 <= options.golden_tol:
        return "upper"
    return None


def optimize_p0(r: int, options: SearchOptions | None = None) -> tuple[float, BoundReport]:
    """Maximise the bound over p0: coarse grid, then golden-section around each peak.

    Refinement never leaves [p0_floor, p0_ceiling]. A best point on either
    cutoff is reported in ``trace.boundary`` and logged as a warning.
    """
    check_degree(r)
    options = options or SearchOptions()
    margin = options.subcritical_margin
    coarse = options.ode.loosened(options.grid_tol_factor)

    grid: list[tuple[float, float | None]] = []
    for p0 in options.grid():
        try:
            grid.append((p0, xi_of_p0(r, p0, coarse, margin).xi))
        except IntegrationError as e:
            logger.warning("r=%d: grid point p0=%g failed: %s", r, p0, e)
            grid.append((p0, None))
    peaks = _local_maxima([xi for _, xi in grid])
    if not peaks:
        raise OptimizationError(f"every grid point failed for r={r}")
    if len(peaks) > 1:
        logger.info("r=%d: %d local maxima on the grid at p0=%s", r, len(peaks),
                    ", ".join(f"{grid[k][0]:g}" for k in peaks))

    evaluated: dict[float, BoundReport] = {}

    def evaluate(p0: float) -> float:
        if p0 not in evaluated:
            try:
                evaluated[p0] = xi_of_p0(r, p0, options.ode, margin)
            except IntegrationError as e:
                logger.warning("r=%d: refinement at p0=%g failed: %s", r, p0, e)
                return -math.inf
        return evaluated[p0].xi

    refined = []
    for k in peaks:
        centre = grid[k][0]
        lo = max(centre - options.grid_step, options.p0_floor)
        hi = min(centre + options.grid_step, options.p0_ceiling)
        evaluate(centre)
        refined.append(golden_section_max(evaluate, lo, hi, options.golden_tol))
    if not evaluated:
        raise OptimizationError(f"every refinement evaluation failed for r={r}")

    best = max(evaluated.values(), key=lambda report: report.xi)
    boundary = search_boundary(best.p0, options)
    if boundary is not None:
        cutoff = options.p0_floor if boundary == "lower" else options.p0_ceiling
        logger.warning(
            "r=%d: best p0=%.6g sits on the %s end of the search range (cutoff %g); "
            "the bound is a supremum approached towards the cutoff, not an interior maximum",
            r, best.p0, boundary, cutoff,
        )
    trace = SearchTrace(
        grid=tuple(grid),
        local_maxima=tuple(grid[k][0] for k in peaks),
        refined=tuple(refined),
        boundary=boundary,
    )
    logger.info("r=%d: xi=%.6f at p0=%.6f", r, best.xi, best.p0)
    return best.p0, replace(best, trace=trace)


def table(r_min: int, r_max: int, options: SearchOptions | None = None) -> list[BoundReport]:
    """Optimised bound for every degree in r_min..r_max."""
    if not 3 <= r_min <= r_max:
        raise InvalidArgumentError(f"need 3 <= r_min <= r_max, got {r_min}, {r_max}")
    return [optimize_p0(r, options)[1] for r in range(r_min, r_max + 1)]
