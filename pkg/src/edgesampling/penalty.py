"""
Analytic expected energy penalty of a sampling schedule.

If the event lands in ``(t_{n-1}, t_n]`` the device pays ``n`` samples and
idles ``t_n - T``, so the penalty is

    alpha * E[S] + beta * E[W]
    E[S] = sum_n n (F(t_n) - F(t_{n-1}))
    E[W] = sum_n t_n (F(t_n) - F(t_{n-1})) - int_{t_{n-1}}^{t_n} t f(t) dt

The integrand is affine in ``t`` on every interval, so CDF differences and
partial expectations give it exactly; no quadrature over the sum is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist import TteDistribution
from .errors import ContractError, ParameterError
from .schedule import PenaltyWeights, Schedule


@dataclass(frozen=True)
class PenaltyBreakdown:
    """Expected samples, expected wait, and the resulting penalty.

    ``truncation_bound`` bounds the penalty error caused by ignoring the
    event mass between the last optimised instant and the tail quantile
    (0 when not applicable).
    """

    expected_samples: float
    expected_wait: float
    alpha: float
    beta: float
    truncation_bound: float = 0.0

    @property
    def penalty(self) -> float:
        return self.alpha * self.expected_samples + self.beta * self.expected_wait

    def as_dict(self) -> dict:
        return {
            "expected_samples": self.expected_samples,
            "expected_wait": self.expected_wait,
            "penalty": self.penalty,
            "alpha": self.alpha,
            "beta": self.beta,
            "truncation_bound": self.truncation_bound,
        }


def _moments(points: np.ndarray, d: TteDistribution) -> tuple[float, float]:
    # points = [0, t_1, ..., t_{N+1}]
    ccdf = np.asarray(d.ccdf(points), dtype=float)
    mass = ccdf[:-1] - ccdf[1:]
    n = np.arange(1, len(points))
    partial = np.array([d.partial_expectation(a, b) for a, b in zip(points[:-1], points[1:])])
    expected_samples = float(np.sum(n * mass))
    expected_wait = float(np.sum(points[1:] * mass - partial))
    return expected_samples, expected_wait


def penalty_components(s: Schedule, d: TteDistribution, w: PenaltyWeights,
                       eps: float | None = None) -> PenaltyBreakdown:
    """Expected samples, wait and penalty of a valid, tail-terminated schedule.

    Event mass beyond the tail sample is excluded. ``truncation_bound`` is
    :func:`truncation_error_bound` evaluated at the last non-tail instant
    with ``eps = ccdf(tail)`` unless ``eps`` is given.
    """
    if not s.is_valid:
        raise ContractError(f"penalty requires a valid schedule, got {s.verdict.value}")
    if s.tail_instant is None:
        raise ContractError("penalty requires a schedule with a tail instant")
    points = np.array((0.0,) + s.all_instants(), dtype=float)
    expected_samples, expected_wait = _moments(points, d)
    if eps is None:
        eps = float(d.ccdf(s.tail_instant))
    bound = truncation_error_bound(d, w, s.last, eps) if s.instants and eps > 0 else 0.0
    return PenaltyBreakdown(expected_samples, expected_wait, w.alpha, w.beta, bound)


def stationarity_residual(s: Schedule, d: TteDistribution, w: PenaltyWeights, n: int) -> float:
    """Partial derivative of the penalty with respect to ``t_n``.

    ``beta (F(t_n) - F(t_{n-1})) - f(t_n) (alpha + beta (t_{n+1} - t_n))``
    for an interior index ``1 <= n <= N-1``; zero on recursion output.
    """
    count = len(s.instants)
    if not 1 <= n <= count - 1:
        raise ParameterError(f"interior index must lie in [1, {count - 1}], got {n!r}")
    t_prev = s.instants[n - 2] if n >= 2 else 0.0
    t_n, t_next = s.instants[n - 1], s.instants[n]
    mass = float(d.cdf_diff(t_prev, t_n))
    return w.beta * mass - float(d.pdf(t_n)) * (w.alpha + w.beta * (t_next - t_n))


def truncation_error_bound(d: TteDistribution, w: PenaltyWeights, t_horizon: float, eps: float) -> float:
    """Upper bound on the penalty lost by optimising only up to ``t_horizon``.

    ``(ccdf(t_horizon) - eps) * (alpha + beta * (q(eps) - t_horizon))`` with
    ``q`` the CCDF quantile; 0 when ``eps >= ccdf(t_horizon)``.
    """
    residual = float(d.ccdf(t_horizon)) - eps
    if residual <= 0.0:
        return 0.0
    gap = float(d.inverse_ccdf(eps)) - t_horizon
    return residual * (w.alpha + w.beta * gap)


def schedule_penalty(instants, tail: float, d: TteDistribution, w: PenaltyWeights) -> float:
    """Penalty of raw instants plus tail, skipping validity checks.

    Intended for perturbation studies and grid searches, where the
    candidate need not satisfy the interval conditions.
    """
    points = np.concatenate(([0.0], np.asarray(instants, dtype=float), [tail]))
    if np.any(np.diff(points) <= 0):
        return math.inf
    expected_samples, expected_wait = _moments(points, d)
    return w.alpha * expected_samples + w.beta * expected_wait
