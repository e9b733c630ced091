"""
Command-line front end.

    edgesampling solve      --scenario S.json [--out F] [--format csv|json]
    edgesampling evaluate   --scenario S.json --schedule solve.json
    edgesampling compare    --scenario S.json
    edgesampling simulate   --scenario S.json [--cycles N] [--seed K]
    edgesampling sweep-mu   --scenario S.json [--means 1,2,...,10]
    edgesampling sweep-comm --scenario S.json [--tau-c ...] [--p-c ...] [--mean M]

Exit codes: 0 success, 1 other error, 2 solver failure, 3 I/O failure,
4 configuration error. Errors are printed to stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .errors import ContractError, ConvergenceError, ParameterError, SamplingError
from .experiments import COMPARE_COLUMNS, SWEEP_COMM_COLUMNS, compare, sweep_comm, sweep_mu
from .penalty import penalty_components
from .scenario import SCHEMA_VERSION, Scenario, ScenarioError, SimSettings, load_scenario
from .schedule import append_tail, from_instants
from .sim import full_energy_offset, simulate
from .solver import solve

log = logging.getLogger("edgesampling")

EXIT_OK, EXIT_OTHER, EXIT_SOLVER, EXIT_IO, EXIT_CONFIG = 0, 1, 2, 3, 4

SOLVE_COLUMNS = ["n", "instant", "interval", "is_tail"]
SIMULATE_COLUMNS = [
    "cycles", "seed", "mean_samples", "se_samples", "mean_wait", "se_wait",
    "mean_penalty", "ci_penalty", "analytic_penalty", "mean_full_energy", "ci_full_energy",
    "analytic_full_energy", "mean_tte", "se_tte", "beyond_tail_count", "alpha", "beta",
]
EVALUATE_COLUMNS = ["n_instants", "tail_instant", "expected_samples", "expected_wait",
                    "penalty", "alpha", "beta", "truncation_bound"]

DEFAULT_MEANS = [float(m) for m in range(1, 11)]
DEFAULT_TAU_C = [1e-3, 5.75e-3, 10.5e-3, 15.25e-3, 20e-3]
DEFAULT_P_C = [0.5, 1.625, 2.75, 3.875, 5.0]


class CliError(Exception):
    def __init__(self, message, code, **extra):
        super().__init__(message)
        self.code = code
        self.extra = extra


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True, help="scenario JSON file")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], default="json")
    common.add_argument("--seed", type=int, help="override the scenario's simulation seed")
    common.add_argument("--quiet", action="store_true", help="suppress progress logging")
    common.add_argument("--figure", action="store_true",
                        help="also render a PNG next to --out (same stem)")

    parser = argparse.ArgumentParser(prog="edgesampling", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="optimal aperiodic schedule")
    ev = sub.add_parser("evaluate", parents=[common], help="penalty of a given schedule")
    ev.add_argument("--schedule", required=True, help="schedule file (solve JSON/CSV or {instants, tail_instant})")
    sub.add_parser("compare", parents=[common], help="aperiodic vs optimal period vs baseline")
    sim = sub.add_parser("simulate", parents=[common], help="Monte Carlo check of the optimal schedule")
    sim.add_argument("--cycles", type=int)
    sim.add_argument("--schedule", help="simulate this schedule instead of solving")
    sim.add_argument("--workers", type=int, default=1)
    mu = sub.add_parser("sweep-mu", parents=[common], help="comparison over mean TTE values")
    mu.add_argument("--means", type=_floats, default=DEFAULT_MEANS)
    mu.add_argument("--jobs", type=int, default=1)
    comm = sub.add_parser("sweep-comm", parents=[common], help="comparison over a tau_c x P_c grid")
    comm.add_argument("--tau-c", type=_floats, default=DEFAULT_TAU_C)
    comm.add_argument("--p-c", type=_floats, default=DEFAULT_P_C)
    comm.add_argument("--mean", type=float, help="override the scenario's mean TTE")
    comm.add_argument("--jobs", type=int, default=1)
    return parser


# -- schedule file reading -------------------------------------------------
def read_schedule(path: str):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".csv"):
        rows = list(csv.DictReader(io.StringIO(text)))
        instants = [float(r["instant"]) for r in rows if r.get("is_tail", "0") in ("0", "false", "False")]
        tails = [float(r["instant"]) for r in rows if r.get("is_tail") in ("1", "true", "True")]
        return instants, (tails[0] if tails else None)
    doc = json.loads(text)
    if isinstance(doc, list):
        return [float(t) for t in doc], None
    if "results" in doc:
        doc = doc["results"].get("schedule", doc["results"])
    return [float(t) for t in doc["instants"]], doc.get("tail_instant")


# -- commands --------------------------------------------------------------
def cmd_solve(args, scenario: Scenario):
    d, w = scenario.distribution, scenario.weights
    result = solve(d, w, scenario.solver)
    s = result.schedule
    results = {
        "t1_star": result.t1_star,
        "iterations": result.iterations,
        "degraded": result.degraded,
        "horizon": result.horizon,
        "schedule": {"instants": list(s.instants), "tail_instant": s.tail_instant,
                     "verdict": s.verdict.value},
        "breakdown": result.breakdown.as_dict(),
        "bracket_trace": [{"low": b.low, "high": b.high, "t1": b.t1, "verdict": b.verdict.value,
                           "length": b.length} for b in result.bracket_trace],
    }
    points = s.all_instants()
    prev = 0.0
    rows = []
    for n, t in enumerate(points, start=1):
        rows.append({"n": n, "instant": t, "interval": t - prev, "is_tail": int(n == len(points))})
        prev = t
    figure = None
    if args.figure:
        from .plotting import plot_solution
        figure = lambda path: plot_solution(result, d, w, path)
    return results, SOLVE_COLUMNS, rows, figure


def cmd_evaluate(args, scenario: Scenario):
    d, w = scenario.distribution, scenario.weights
    try:
        instants, tail = read_schedule(args.schedule)
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(f"unreadable schedule file: {exc}", EXIT_CONFIG) from None
    s = from_instants(instants)
    if not s.is_valid:
        raise ContractError(f"schedule {s.verdict.value} at n={s.violation_index}")
    s = replace(s, tail_instant=float(tail)) if tail is not None else append_tail(s, d, scenario.solver.eps)
    breakdown = penalty_components(s, d, w, eps=scenario.solver.eps)
    row = {"n_instants": len(s), "tail_instant": s.tail_instant, **breakdown.as_dict()}
    return row, EVALUATE_COLUMNS, [row], None


def cmd_compare(args, scenario: Scenario):
    row = compare(scenario)
    figure = None
    if args.figure:
        from .plotting import plot_compare
        figure = lambda path: plot_compare(row, path)
    return row, COMPARE_COLUMNS, [row], figure


def cmd_simulate(args, scenario: Scenario):
    if scenario.device is None:
        raise ScenarioError("device", "simulate needs a device profile for the full-energy model")
    d = scenario.distribution
    settings = scenario.sim or SimSettings()
    cycles = args.cycles if args.cycles is not None else settings.cycles
    seed = args.seed if args.seed is not None else settings.seed
    if args.schedule:
        instants, tail = read_schedule(args.schedule)
        s = from_instants(instants)
        if not s.is_valid:
            raise ContractError(f"schedule {s.verdict.value} at n={s.violation_index}")
        s = replace(s, tail_instant=float(tail)) if tail is not None else append_tail(s, d, scenario.solver.eps)
    else:
        s = solve(d, scenario.weights, scenario.solver).schedule
    report = simulate(s, d, scenario.device, cycles, seed, workers=args.workers)
    analytic = penalty_components(s, d, scenario.weights, eps=scenario.solver.eps)
    row = report.as_dict()
    row["analytic_penalty"] = analytic.penalty
    row["analytic_full_energy"] = analytic.penalty + full_energy_offset(d, scenario.device)
    return row, SIMULATE_COLUMNS, [row], None


def cmd_sweep_mu(args, scenario: Scenario):
    rows = sweep_mu(scenario, args.means, jobs=args.jobs)
    figure = None
    if args.figure:
        from .plotting import plot_sweep_mu
        figure = lambda path: plot_sweep_mu(rows, path)
    return {"rows": rows}, COMPARE_COLUMNS, rows, figure


def cmd_sweep_comm(args, scenario: Scenario):
    if args.mean is not None:
        scenario = scenario.with_mean(args.mean)
    rows = sweep_comm(scenario, args.tau_c, args.p_c, jobs=args.jobs)
    figure = None
    if args.figure:
        from .plotting import plot_sweep_comm
        figure = lambda path: plot_sweep_comm(rows, path)
    return {"rows": rows}, SWEEP_COMM_COLUMNS, rows, figure


COMMANDS = {
    "solve": cmd_solve,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
    "simulate": cmd_simulate,
    "sweep-mu": cmd_sweep_mu,
    "sweep-comm": cmd_sweep_comm,
}


# -- output ----------------------------------------------------------------
def _plain(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _cell(value) -> str:
    value = _plain(value)
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return "" if value is None else str(value)


def render(command: str, scenario: Scenario, results, columns, rows, fmt: str) -> str:
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command,
               "scenario_echo": scenario.echo(), "results": _plain(results)}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _error(exc: BaseException, code: int, **extra) -> int:
    payload = {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code, **extra}}
    sys.stderr.write(json.dumps(_plain(payload)) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        scenario = load_scenario(args.scenario)
        if args.seed is not None and scenario.sim is not None:
            scenario = replace(scenario, sim=replace(scenario.sim, seed=args.seed))
        results, columns, rows, figure = COMMANDS[args.command](args, scenario)
        text = render(args.command, scenario, results, columns, rows, args.format)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            if figure is not None:
                stem = args.out.rsplit(".", 1)[0] if "." in args.out.rsplit("/", 1)[-1] else args.out
                figure(stem + ".png")
        else:
            sys.stdout.write(text)
            if figure is not None:
                log.warning("--figure needs --out; no figure written")
    except ConvergenceError as exc:
        trace = [step if isinstance(step, (tuple, list)) else
                 {"low": step.low, "high": step.high, "t1": step.t1, "verdict": step.verdict.value}
                 for step in exc.trace]
        return _error(exc, EXIT_SOLVER, trace=trace)
    except OSError as exc:
        return _error(exc, EXIT_IO)
    except CliError as exc:
        return _error(exc, exc.code, **exc.extra)
    except (ScenarioError, ParameterError, ContractError) as exc:
        extra = {"path": exc.path} if isinstance(exc, ScenarioError) else {}
        return _error(exc, EXIT_CONFIG, **extra)
    except SamplingError as exc:
        return _error(exc, EXIT_OTHER)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
