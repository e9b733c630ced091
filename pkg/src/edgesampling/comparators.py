"""
Periodic sampling baselines.

Sampling at ``T, 2T, 3T, ...`` means ``S = ceil(T_event / T)`` and
``W = S*T - T_event``, hence

    E[S] = sum_{n >= 0} ccdf(n T)
    E[W] = T E[S] - E[T_event]

The fixed 83.3 ms policy is the baseline; the best period (found by a
coarse log scan followed by golden-section refinement) is the periodic
comparator for the aperiodic solver.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dist import TteDistribution
from .errors import ParameterError, ResourceError
from .penalty import PenaltyBreakdown
from .schedule import PenaltyWeights

BASELINE_PERIOD = 0.0833
MAX_TERMS = 10**9
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class BoundaryWarning(UserWarning):
    """The coarse scan found its minimum on the edge of the search range."""


@dataclass(frozen=True)
class PeriodicPolicy:
    period: float
    truncation_eps: float = 1e-22

    def __post_init__(self):
        if not (math.isfinite(self.period) and self.period > 0):
            raise ParameterError(f"period must be positive, got {self.period!r}")
        if not 0 < self.truncation_eps < 1:
            raise ParameterError(f"truncation_eps must lie in (0, 1), got {self.truncation_eps!r}")


def periodic_penalty_components(p: PeriodicPolicy, d: TteDistribution, w: PenaltyWeights) -> PenaltyBreakdown:
    """Expected samples, wait and penalty of sampling every ``p.period`` seconds.

    The sum over ``ccdf(nT)`` stops before the first term below
    ``p.truncation_eps``; ``truncation_bound`` bounds the dropped penalty.
    """
    T = p.period
    cutoff = float(d.inverse_ccdf(p.truncation_eps))
    terms = int(math.floor(cutoff / T)) + 1
    if terms > MAX_TERMS:
        raise ResourceError(f"period {T!r} needs {terms} terms (limit {MAX_TERMS})")
    n = np.arange(terms, dtype=float)
    survival = np.asarray(d.ccdf(n * T), dtype=float)
    survival = survival[survival >= p.truncation_eps]
    expected_samples = float(np.sum(survival))
    expected_wait = T * expected_samples - d.mean
    # dropped terms: sum_{n > N} ccdf(nT) <= (1/T) int_{NT}^inf ccdf(t) dt
    last = (len(survival) - 1) * T
    tail_area = d.partial_expectation(last, math.inf) - last * float(d.ccdf(last))
    bound = (w.alpha + w.beta * T) * max(tail_area, 0.0) / T
    return PenaltyBreakdown(expected_samples, expected_wait, w.alpha, w.beta, bound)


def periodic_penalty(period: float, d: TteDistribution, w: PenaltyWeights, truncation_eps: float = 1e-22) -> float:
    return periodic_penalty_components(PeriodicPolicy(period, truncation_eps), d, w).penalty


def golden_section(f, a: float, b: float, tolerance: float) -> float:
    """Minimiser of a unimodal ``f`` on ``[a, b]`` to bracket width ``tolerance``."""
    c = b - _INV_PHI * (b - a)
    e = a + _INV_PHI * (b - a)
    fc, fe = f(c), f(e)
    while b - a > tolerance:
        if fc <= fe:
            b, e, fe = e, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + _INV_PHI * (b - a)
            fe = f(e)
    return (a + b) / 2


def optimal_period(d: TteDistribution, w: PenaltyWeights, t_min: float | None = None,
                   t_max: float | None = None, tolerance: float | None = None,
                   truncation_eps: float = 1e-22) -> PeriodicPolicy:
    """Period minimising the periodic penalty.

    Defaults: ``t_min = 1e-4 * mean``, ``t_max = 2 * mean`` and
    ``tolerance = 1e-9 * mean``. A :class:`BoundaryWarning` is issued when
    the 100-point log scan bottoms out on either end of the range.
    """
    t_min = 1e-4 * d.mean if t_min is None else float(t_min)
    t_max = 2.0 * d.mean if t_max is None else float(t_max)
    tolerance = 1e-9 * d.mean if tolerance is None else float(tolerance)
    if not 0 < t_min < t_max:
        raise ParameterError(f"need 0 < t_min < t_max, got {t_min!r}, {t_max!r}")
    objective = lambda T: periodic_penalty(T, d, w, truncation_eps)
    grid = np.geomspace(t_min, t_max, 100)
    values = [objective(T) for T in grid]
    i = int(np.argmin(values))
    if i in (0, len(grid) - 1):
        warnings.warn(f"periodic optimum at search boundary T={grid[i]:.6g}; widen [t_min, t_max]",
                      BoundaryWarning, stacklevel=2)
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    return PeriodicPolicy(golden_section(objective, lo, hi, tolerance), truncation_eps)
