"""
Policy comparisons and parameter sweeps.

Every grid point solves the aperiodic problem, finds the best period and
evaluates the fixed baseline period, then reports absolute penalties and
percentage reductions ``100 * (1 - penalty_a / penalty_b)``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Iterable, Sequence

from .comparators import optimal_period, periodic_penalty_components, PeriodicPolicy
from .scenario import Scenario, ScenarioError
from .solver import solve

COMPARE_COLUMNS = [
    "mean", "sigma", "alpha", "beta", "beta_over_alpha",
    "t1_star", "n_instants", "degraded",
    "penalty_optimal", "penalty_periodic", "penalty_baseline",
    "optimal_period", "baseline_period",
    "expected_samples_optimal", "expected_wait_optimal",
    "reduction_optimal_vs_periodic_pct", "reduction_optimal_vs_baseline_pct",
    "reduction_periodic_vs_baseline_pct", "truncation_bound",
]
SWEEP_COMM_COLUMNS = ["tau_c", "p_c"] + COMPARE_COLUMNS


def reduction(penalty_a: float, penalty_b: float) -> float:
    """Percentage by which ``penalty_a`` undercuts ``penalty_b``."""
    return 100.0 * (1.0 - penalty_a / penalty_b)


def compare(scenario: Scenario) -> dict:
    d, w = scenario.distribution, scenario.weights
    result = solve(d, w, scenario.solver)
    search = scenario.periodic_search
    periodic = optimal_period(d, w, search.t_min, search.t_max, search.tolerance)
    p_opt = result.penalty
    p_per = periodic_penalty_components(periodic, d, w).penalty
    p_base = periodic_penalty_components(PeriodicPolicy(scenario.baseline_period), d, w).penalty
    return {
        "mean": d.mean,
        "sigma": d.params().get("sigma"),
        "alpha": w.alpha,
        "beta": w.beta,
        "beta_over_alpha": w.ratio,
        "t1_star": result.t1_star,
        "n_instants": len(result.schedule),
        "degraded": result.degraded,
        "penalty_optimal": p_opt,
        "penalty_periodic": p_per,
        "penalty_baseline": p_base,
        "optimal_period": periodic.period,
        "baseline_period": scenario.baseline_period,
        "expected_samples_optimal": result.breakdown.expected_samples,
        "expected_wait_optimal": result.breakdown.expected_wait,
        "reduction_optimal_vs_periodic_pct": reduction(p_opt, p_per),
        "reduction_optimal_vs_baseline_pct": reduction(p_opt, p_base),
        "reduction_periodic_vs_baseline_pct": reduction(p_per, p_base),
        "truncation_bound": result.breakdown.truncation_bound,
    }


def _comm_point(args) -> dict:
    scenario, tau_c, p_c = args
    device = replace(scenario.device, tau_c=tau_c, p_c=p_c)
    return {"tau_c": tau_c, "p_c": p_c, **compare(scenario.with_device(device))}


def _run(fn, items: list, jobs: int) -> list:
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))  # map keeps grid order
    return [fn(item) for item in items]


def sweep_mu(scenario: Scenario, means: Iterable[float], jobs: int = 1) -> list[dict]:
    """One comparison row per mean time-to-event."""
    return _run(compare, [scenario.with_mean(float(m)) for m in means], jobs)


def sweep_comm(scenario: Scenario, tau_c: Sequence[float], p_c: Sequence[float],
               jobs: int = 1) -> list[dict]:
    """Rows over the ``tau_c`` x ``p_c`` grid (tau_c varies slowest)."""
    if scenario.device is None:
        raise ScenarioError("device", "sweep-comm needs a device profile, not direct weights")
    grid = [(scenario, float(tc), float(pc)) for tc in tau_c for pc in p_c]
    return _run(_comm_point, grid, jobs)
