"""
Bisection over the first sampling instant.

For a fixed ``t_1`` the recursion fixes every later instant, so the search
is one-dimensional. Sequences started too early eventually produce a
nonpositive interval; sequences started too late produce a growing one and
blow up. Both failure modes are monotone in ``t_1``, which makes plain
bisection on the verdict correct: a positive-interval violation raises the
lower end, a decreasing-interval violation lowers the upper end.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

from .dist import TteDistribution
from .errors import ConvergenceError, NoValidWindowError, ParameterError
from .penalty import PenaltyBreakdown, penalty_components
from .schedule import PenaltyWeights, Schedule, Verdict, append_tail, generate

log = logging.getLogger(__name__)

MAX_EXPANSIONS = 60


@dataclass(frozen=True)
class SolverConfig:
    """Stopping rules for :func:`solve`.

    The horizon is ``horizon_multiplier * mean``; ``t1_tolerance`` defaults
    to ``1e-12 * mean`` when left as None.
    """

    horizon_multiplier: float = 6.0
    eps: float = 1e-22
    bracket: Optional[tuple[float, float]] = None
    t1_tolerance: Optional[float] = None
    max_iterations: int = 200

    def __post_init__(self):
        if not self.horizon_multiplier > 1:
            raise ParameterError(f"horizon_multiplier must exceed 1, got {self.horizon_multiplier!r}")
        if not 0 < self.eps < 1:
            raise ParameterError(f"eps must lie in (0, 1), got {self.eps!r}")
        if self.bracket is not None:
            low, high = self.bracket
            if not 0 < low < high:
                raise ParameterError(f"bracket must satisfy 0 < low < high, got {self.bracket!r}")
        if self.t1_tolerance is not None and not self.t1_tolerance > 0:
            raise ParameterError(f"t1_tolerance must be positive, got {self.t1_tolerance!r}")
        if not self.max_iterations >= 1:
            raise ParameterError(f"max_iterations must be >= 1, got {self.max_iterations!r}")

    def horizon(self, d: TteDistribution) -> float:
        return self.horizon_multiplier * d.mean

    def tolerance(self, d: TteDistribution) -> float:
        return self.t1_tolerance if self.t1_tolerance is not None else 1e-12 * d.mean


@dataclass(frozen=True)
class BracketStep:
    low: float
    high: float
    t1: float
    verdict: Verdict
    length: int


@dataclass(frozen=True)
class SolverResult:
    t1_star: float
    schedule: Schedule
    breakdown: PenaltyBreakdown
    iterations: int
    bracket_trace: list[BracketStep] = field(default_factory=list)
    horizon: float = math.nan
    degraded: bool = False

    @property
    def penalty(self) -> float:
        return self.breakdown.penalty


def classify_t1(d: TteDistribution, w: PenaltyWeights, t1: float, horizon: float) -> Schedule:
    """:func:`generate`, tolerating trial values at or beyond the horizon."""
    if t1 < horizon:
        return generate(d, w, t1, horizon)
    # only the first interval can be judged
    schedule = generate(d, w, t1, t1 * (1 + 1e-9) + 1e-300)
    if schedule.verdict is Verdict.VALID:
        return Schedule(schedule.instants[:1], Verdict.VALID)
    return schedule


def initial_bracket(d: TteDistribution, w: PenaltyWeights,
                    horizon: Optional[float] = None) -> tuple[float, float]:
    """Find ``(low, high)`` whose sequences violate opposite conditions.

    Starts from ``alpha/beta * (1 + 1e-6)`` and the median, halving the
    lower end and doubling the upper end until the verdicts hold.
    """
    if not d.has_increasing_hazard:
        raise ParameterError(f"{type(d).__name__} is not known to have a nondecreasing hazard")
    if horizon is None:
        horizon = SolverConfig().horizon(d)
    low, high = w.offset * (1 + 1e-6), d.median
    if low >= high:
        high = 2 * low
    seen = []
    for _ in range(MAX_EXPANSIONS):
        verdict = classify_t1(d, w, low, horizon).verdict
        seen.append(("low", low, verdict.value))
        if verdict is Verdict.VIOLATES_POSITIVE:
            break
        low /= 2
    else:
        raise NoValidWindowError(f"no positive-interval violation below {low!r}", seen)
    for _ in range(MAX_EXPANSIONS):
        verdict = classify_t1(d, w, high, horizon).verdict
        seen.append(("high", high, verdict.value))
        if verdict is Verdict.VIOLATES_DECREASING:
            break
        high *= 2
    else:
        raise NoValidWindowError(f"no decreasing-interval violation above {high!r}", seen)
    return low, high


def solve(d: TteDistribution, w: PenaltyWeights, cfg: SolverConfig = SolverConfig()) -> SolverResult:
    """Optimal aperiodic schedule for ``d`` under weights ``w``.

    Bisects on ``t_1`` until a midpoint stays valid up to the horizon. If
    the bracket collapses first (horizon beyond what double precision can
    resolve) the midpoint with the longest valid prefix is returned with
    ``degraded=True``. Either way the schedule gets a tail sample at the
    ``cfg.eps`` quantile. Deterministic for identical inputs.
    """
    horizon = cfg.horizon(d)
    tolerance = cfg.tolerance(d)
    low, high = cfg.bracket if cfg.bracket is not None else initial_bracket(d, w, horizon)
    trace: list[BracketStep] = []
    best: Optional[tuple[float, Schedule]] = None
    for iteration in range(1, cfg.max_iterations + 1):
        t1 = (low + high) / 2
        candidate = classify_t1(d, w, t1, horizon)
        trace.append(BracketStep(low, high, t1, candidate.verdict, len(candidate)))
        if candidate.verdict is Verdict.VALID:
            return _finish(d, w, cfg, t1, candidate, iteration, trace, horizon, degraded=False)
        if best is None or len(candidate) > len(best[1]):
            best = (t1, candidate)
        if candidate.verdict is Verdict.VIOLATES_POSITIVE:
            low = t1
        else:
            high = t1
        if high - low <= tolerance:
            log.info("bracket collapsed at width %.3g before reaching horizon %.6g; "
                     "returning longest valid prefix (%d instants)", high - low, horizon, len(best[1]))
            t1, candidate = best
            prefix = Schedule(candidate.instants, Verdict.VALID)
            return _finish(d, w, cfg, t1, prefix, iteration, trace, horizon, degraded=True)
    raise ConvergenceError(f"bisection did not converge in {cfg.max_iterations} iterations", trace)


def _finish(d, w, cfg, t1, schedule, iterations, trace, horizon, degraded) -> SolverResult:
    schedule = append_tail(schedule, d, cfg.eps)
    breakdown = penalty_components(schedule, d, w, eps=cfg.eps)
    return SolverResult(t1_star=t1, schedule=schedule, breakdown=breakdown, iterations=iterations,
                        bracket_trace=trace, horizon=horizon, degraded=degraded)
