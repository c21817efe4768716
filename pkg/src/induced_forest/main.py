"""Command-line entry point."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from collections.abc import Sequence
from dataclasses import replace
from pathlib import Path
from typing import Any, TextIO

from induced_forest import __version__
from induced_forest.analysis.bounds import BoundReport, optimize_p0, table, xi_of_p0
from induced_forest.analysis.ode_system import as_trajectory, integrate
from induced_forest.analysis.recurrence import iterate
from induced_forest.analysis.state import FIELDS, TrajectoryMode
from induced_forest.core.errors import InducedForestError, InvalidArgumentError
from induced_forest.core.fixtures import FIXTURE_NAMES, fixture
from induced_forest.core.graph import Graph, generate_regular, read_graph
from induced_forest.core.settings import IntegrationMethod, OutputFormat, Settings
from induced_forest.oracle.checks import CHECKS, OracleParams, run_check
from induced_forest.process.forest import AlgorithmParams, run
from induced_forest.process.simulation import GeneratorSpec, empirical_forest_fraction

logger = logging.getLogger(__name__)

CSV_HELP = """\
CSV columns:
  trace --mode exact|linearized   step,w,b,q,s,t
  trace --mode ode                x,w,b,q,s,t,b_integral_so_far
Numbers use a dot decimal separator and --precision significant digits.
"""


def _number(value: float, precision: int) -> str:
    return f"{value:.{precision}g}"


def _rounded(data: Any, precision: int) -> Any:
    """Round every float in a JSON structure to ``precision`` significant digits."""
    if isinstance(data, bool) or data is None:
        return data
    if isinstance(data, float):
        return float(_number(data, precision))
    if isinstance(data, dict):
        return {key: _rounded(value, precision) for key, value in data.items()}
    if isinstance(data, list | tuple):
        return [_rounded(value, precision) for value in data]
    return data


def _emit_json(data: Any, precision: int, out: TextIO) -> None:
    json.dump(_rounded(data, precision), out, indent=2)
    out.write("\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="induced-forest",
        description="Lower bounds on induced forests in regular graphs of large girth",
        epilog=CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, help="Settings file (default: user config dir)")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Diagnostics written to stderr",
    )
    parser.add_argument("--precision", type=int, help="Significant digits in numeric output")
    sub = parser.add_subparsers(dest="command", required=True)

    bound = sub.add_parser("bound", help="Bound for one degree, optimised or at a given p0")
    bound.add_argument("--r", type=int, required=True)
    bound.add_argument("--p0", type=float, help="Evaluate at this p0 instead of optimising")
    bound.add_argument("--method", choices=[m.value for m in IntegrationMethod])
    bound.add_argument("--json", action="store_true", help="Machine-readable output")
    bound.add_argument("--trace", action="store_true", help="Include the optimiser trace")

    tab = sub.add_parser("table", help="Optimised bounds for a range of degrees")
    tab.add_argument("--r-min", type=int, default=3)
    tab.add_argument("--r-max", type=int, default=10)
    tab.add_argument("--method", choices=[m.value for m in IntegrationMethod])
    tab.add_argument("--json", action="store_true", help="Machine-readable output")

    trace = sub.add_parser(
        "trace",
        help="Trajectory of (w, b, q, s, t) as CSV",
        epilog=CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    trace.add_argument("--mode", choices=[m.value for m in TrajectoryMode], default="exact")
    trace.add_argument("--r", type=int, required=True)
    trace.add_argument("--p0", type=float, required=True)
    trace.add_argument("--p", type=float, default=0.01, help="Step probability (recurrences)")
    trace.add_argument("--steps", type=int, default=100, help="Step count (recurrences)")
    trace.add_argument("--spacing", type=float, default=0.1, help="x spacing (ode)")
    trace.add_argument("--x-end", type=float, help="Integrate to this x (ode)")

    simulate = sub.add_parser("simulate", help="Run the algorithm on a graph, JSON output")
    source = simulate.add_mutually_exclusive_group()
    source.add_argument("--graph", type=Path, help="Graph file: 'n m' then m lines 'u v'")
    source.add_argument("--fixture", choices=FIXTURE_NAMES)
    simulate.add_argument("--n", type=int, default=1000, help="Vertices of a generated graph")
    simulate.add_argument("--r", type=int, default=3, help="Degree of a generated graph")
    simulate.add_argument("--p0", type=float, required=True)
    simulate.add_argument("--p", type=float, required=True)
    simulate.add_argument("--steps", type=int, required=True, help="N")
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--runs", type=int, default=1)
    simulate.add_argument("--workers", type=int, default=1)

    oracle = sub.add_parser("oracle", help="Check formulas against the tree, JSON output")
    oracle.add_argument("--check", choices=list(CHECKS), required=True)
    oracle.add_argument("--r", type=int, default=3)
    oracle.add_argument("--i", type=int, default=1)
    oracle.add_argument("--p0", type=float, default=0.2)
    oracle.add_argument("--p", type=float, default=0.1)
    oracle.add_argument("--samples", type=int, help="Monte-Carlo samples")
    oracle.add_argument("--seed", type=int, default=0)
    return parser


def _settings(args: argparse.Namespace) -> Settings:
    settings = Settings.load(args.config)
    if args.precision is not None:
        settings.precision = args.precision
    if args.log_level is not None:
        settings.log_level = args.log_level
    if getattr(args, "method", None):
        settings.ode_method = IntegrationMethod(args.method)
    if getattr(args, "json", False):
        settings.output_format = OutputFormat.JSON
    settings.validate()
    return settings


def _bound_text(report: BoundReport, precision: int) -> str:
    def num(value: float) -> str:
        return _number(value, precision)

    lines = [
        f"r = {report.r}",
        f"p0 = {num(report.p0)}",
        f"xi = {num(report.xi)}",
        f"Xi = {num(report.Xi)}",
        f"subcritical = {'yes' if report.subcritical else 'no'}",
        f"root term = {num(report.root_term)}",
        f"integral term = {num(report.integral_term)}",
        f"white term = {num(report.white_term)}",
        f"limiting ratio = {num(report.ratio_limit)}",
    ]
    if report.trace is not None:
        peaks = ", ".join(num(p0) for p0 in report.trace.local_maxima)
        lines.append(f"grid maxima at p0 = {peaks}")
    return "\n".join(lines)


def _cmd_bound(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    boundary = None
    if args.p0 is not None:
        report = xi_of_p0(args.r, args.p0, settings.ode_options(), settings.subcritical_margin)
    else:
        _, report = optimize_p0(args.r, settings.search_options())
        boundary = report.trace.boundary if report.trace is not None else None
        if not args.trace:
            report = replace(report, trace=None)
    if settings.output_format is OutputFormat.JSON:
        data = report.to_dict()
        if boundary is not None:
            data["search_boundary"] = boundary
        _emit_json(data, settings.precision, out)
    else:
        text = _bound_text(report, settings.precision)
        if boundary is not None:
            text += f"\nsearch boundary = {boundary} (xi is a supremum towards the cutoff)"
        out.write(text + "\n")
    return 0


def _cmd_table(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    reports = [replace(report, trace=None) for report in
               table(args.r_min, args.r_max, settings.search_options())]
    if settings.output_format is OutputFormat.JSON:
        _emit_json([report.to_dict() for report in reports], settings.precision, out)
        return 0
    width = settings.precision + 6
    out.write(f"{'r':>3}  {'p0':>{width}}  {'xi':>{width}}  {'Xi':>{width}}\n")
    for report in reports:
        cells = (_number(v, settings.precision) for v in (report.p0, report.xi, report.Xi))
        out.write(f"{report.r:>3}  " + "  ".join(f"{c:>{width}}" for c in cells) + "\n")
    return 0


def _cmd_trace(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    writer = csv.writer(out, lineterminator="\n")
    precision = settings.precision
    mode = TrajectoryMode(args.mode)
    if mode is TrajectoryMode.ODE:
        sol = integrate(args.r, args.p0, settings.ode_options(), x_end=args.x_end)
        writer.writerow(["x", *FIELDS, "b_integral_so_far"])
        for x, state in as_trajectory(sol, args.spacing).points:
            row = [x, *state, sol.integral_at(x)]
            writer.writerow([_number(v, precision) for v in row])
        return 0
    traj = iterate(args.r, args.p0, args.p, args.steps, mode)
    writer.writerow(["step", *FIELDS])
    for step, state in traj.points:
        writer.writerow([int(step), *(_number(v, precision) for v in state)])
    return 0


def _simulation_source(args: argparse.Namespace) -> tuple[Graph | GeneratorSpec, dict[str, Any]]:
    if args.graph is not None:
        return read_graph(args.graph), {"graph": str(args.graph)}
    if args.fixture is not None:
        return fixture(args.fixture), {"fixture": args.fixture}
    generated = {"n": args.n, "r": args.r, "seed": args.seed}
    return GeneratorSpec(n=args.n, r=args.r), {"generated": generated}


def _cmd_simulate(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    params = AlgorithmParams(N=args.steps, p0=args.p0, p=args.p, seed=args.seed)
    source, described = _simulation_source(args)
    if args.runs == 1:
        g = source if isinstance(source, Graph) else generate_regular(args.n, args.r, args.seed)
        result = run(g, params)
        record = result.to_json_dict(g, params)
        record["source"] = described
        _emit_json(record, settings.precision, out)
        return 0
    stats = empirical_forest_fraction(source, params, args.runs, workers=args.workers)
    record = {"source": described, "params": params.to_dict(), **stats.to_dict()}
    _emit_json(record, settings.precision, out)
    return 0


def _cmd_oracle(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    params = OracleParams(
        r=args.r,
        i=args.i,
        p0=args.p0,
        p=args.p,
        samples=args.samples if args.samples is not None else settings.mc_samples,
        seed=args.seed,
        budget=settings.enumeration_budget,
    )
    result = run_check(args.check, params)
    record = {
        "r": params.r,
        "i": params.i,
        "p0": params.p0,
        "p": params.p,
        "samples": params.samples,
        "seed": params.seed,
        **result.to_dict(),
    }
    _emit_json(record, settings.precision, out)
    return 0 if result.passed else 1


COMMANDS = {
    "bound": _cmd_bound,
    "table": _cmd_table,
    "trace": _cmd_trace,
    "simulate": _cmd_simulate,
    "oracle": _cmd_oracle,
}


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    """Parse ``argv`` and run a subcommand; returns the process exit code.

    0 on success, 1 when an oracle check fails, 2 on invalid arguments and
    3 on numeric failures.
    """
    out = out or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        settings = _settings(args)
        logging.basicConfig(
            level=settings.log_level,
            stream=sys.stderr,
            format="%(levelname)s %(name)s: %(message)s",
        )
        return COMMANDS[args.command](args, settings, out)
    except InvalidArgumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except InducedForestError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
