import math
import warnings

import numpy as np
import pytest

from edgesampling.comparators import (
    BASELINE_PERIOD, BoundaryWarning, PeriodicPolicy, golden_section, optimal_period,
    periodic_penalty, periodic_penalty_components,
)
from edgesampling.dist import Rayleigh
from edgesampling.errors import ParameterError, ResourceError
from edgesampling.schedule import PenaltyWeights
from edgesampling.solver import solve


def direct_sum(T, d, w, eps=1e-22):
    """Per-interval accounting, the slow way."""
    es = ew = 0.0
    n = 1
    while True:
        a, b = (n - 1) * T, n * T
        mass = float(d.cdf_diff(a, b))
        es += n * mass
        ew += b * mass - d.partial_expectation(a, b)
        if float(d.ccdf(b)) < eps:
            return es, ew
        n += 1


def test_large_period_takes_one_sample(unit_mean, ratio21):
    T = 20.0
    b = periodic_penalty_components(PeriodicPolicy(T), unit_mean, ratio21)
    assert b.expected_samples == 1.0
    assert b.expected_wait == pytest.approx(T - 1.0, rel=1e-15)


def test_baseline_sample_count(glass_dist, ratio217):
    b = periodic_penalty_components(PeriodicPolicy(BASELINE_PERIOD), glass_dist, ratio217)
    assert b.expected_samples == pytest.approx(4.846 / BASELINE_PERIOD + 0.5, abs=0.5)
    exact = sum(float(glass_dist.ccdf(n * BASELINE_PERIOD)) for n in range(2000))
    assert b.expected_samples == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize("T", [0.0833, 0.31, 1.7])
def test_wait_identity(glass_dist, ratio217, T):
    b = periodic_penalty_components(PeriodicPolicy(T), glass_dist, ratio217)
    es, ew = direct_sum(T, glass_dist, ratio217)
    assert b.expected_samples == pytest.approx(es, rel=1e-9)
    assert b.expected_wait == pytest.approx(ew, rel=1e-9)


def test_truncation_bound_is_tiny(glass_dist, ratio217):
    b = periodic_penalty_components(PeriodicPolicy(0.5), glass_dist, ratio217)
    assert 0.0 <= b.truncation_bound < 1e-18


def test_term_limit(unit_mean, ratio21):
    with pytest.raises(ResourceError):
        periodic_penalty_components(PeriodicPolicy(1e-9), unit_mean, ratio21)


@pytest.mark.parametrize("kwargs", [dict(period=0.0), dict(period=math.inf), dict(period=1.0, truncation_eps=0.0)])
def test_policy_validation(kwargs):
    with pytest.raises(ParameterError):
        PeriodicPolicy(**kwargs)


def test_cheap_samples_push_period_to_lower_boundary(unit_mean):
    periods = [optimal_period(unit_mean, PenaltyWeights.from_ratio(r)).period for r in (1e2, 1e4, 1e6)]
    assert periods[0] > periods[1] > periods[2]
    # the optimum shrinks like sqrt(alpha/beta)
    assert periods[1] / periods[2] == pytest.approx(10.0, rel=0.05)
    with pytest.warns(BoundaryWarning):
        p = optimal_period(unit_mean, PenaltyWeights.from_ratio(1e6), t_min=0.01)
    assert p.period < 0.0105


def test_interior_optimum_raises_no_warning(glass_dist, ratio217):
    with warnings.catch_warnings():
        warnings.simplefilter("error", BoundaryWarning)
        optimal_period(glass_dist, ratio217)


def test_periodic_worse_than_aperiodic(glass_dist, ratio217):
    periodic = periodic_penalty_components(optimal_period(glass_dist, ratio217), glass_dist, ratio217)
    assert periodic.penalty > solve(glass_dist, ratio217).penalty


def test_golden_section_matches_dense_scan(glass_dist, ratio217):
    tol = 1e-6
    found = optimal_period(glass_dist, ratio217, t_min=0.3, t_max=1.2, tolerance=tol).period
    grid = np.linspace(0.66, 0.70, 100_001)  # spacing 4e-7
    values = [periodic_penalty(T, glass_dist, ratio217) for T in grid]
    assert abs(found - grid[int(np.argmin(values))]) <= 2 * tol


def test_golden_section_on_parabola():
    assert golden_section(lambda x: (x - 0.3) ** 2, -1.0, 2.0, 1e-10) == pytest.approx(0.3, abs=1e-10)


@pytest.mark.parametrize("mean", [0.5, 1.0, 4.846, 10.0])
@pytest.mark.parametrize("ratio", [5.0, 21.7, 200.0])
def test_policy_ordering(mean, ratio):
    d, w = Rayleigh.from_mean(mean), PenaltyWeights.from_ratio(ratio)
    best = periodic_penalty_components(optimal_period(d, w), d, w).penalty
    base = periodic_penalty(BASELINE_PERIOD, d, w)
    assert solve(d, w).penalty <= best <= base


def test_continuity_in_period(glass_dist, ratio217):
    for T in np.geomspace(0.01, 5.0, 40):
        p = periodic_penalty(T, glass_dist, ratio217)
        assert abs(p - periodic_penalty(T + 1e-9, glass_dist, ratio217)) < 1e-6 * p


def test_samples_nonincreasing_in_period(glass_dist, ratio217):
    es = [periodic_penalty_components(PeriodicPolicy(T), glass_dist, ratio217).expected_samples
          for T in np.geomspace(0.01, 10.0, 200)]
    assert all(b <= a for a, b in zip(es, es[1:]))
