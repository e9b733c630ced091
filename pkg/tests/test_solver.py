import math

import mpmath as mp
import pytest

import edgesampling.solver as solver_mod
from edgesampling.dist import Rayleigh
from edgesampling.errors import ConvergenceError, NoValidWindowError, ParameterError
from edgesampling.penalty import penalty_components
from edgesampling.schedule import PenaltyWeights, Verdict, append_tail, generate
from edgesampling.solver import SolverConfig, classify_t1, initial_bracket, solve

T1_STAR_21 = 0.5888299678
T1_STAR_217 = 0.5827689509


def shooting_t1(ratio, n_target=40):
    """Independent oracle: bisect the recursion in 40-digit arithmetic."""
    with mp.workdps(40):
        sigma = mp.mpf(1) / mp.sqrt(mp.pi / 2)
        off = 1 / mp.mpf(ratio)

        def verdict(t1):
            prev, curr, gap = mp.mpf(0), t1, t1
            for _ in range(n_target):
                nxt = curr + sigma**2 / curr * mp.expm1((curr**2 - prev**2) / (2 * sigma**2)) - off
                if nxt - curr <= 0:
                    return -1
                if nxt - curr >= gap:
                    return 1
                prev, curr, gap = curr, nxt, nxt - curr
            return 0

        lo, hi = mp.mpf("0.5"), mp.mpf("0.7")
        for _ in range(120):
            mid = (lo + hi) / 2
            v = verdict(mid)
            if v == 0:
                return float(mid)
            lo, hi = (mid, hi) if v < 0 else (lo, mid)
        return float((lo + hi) / 2)


def test_initial_bracket(unit_mean, ratio21):
    low, high = initial_bracket(unit_mean, ratio21)
    assert low < 0.582 < high
    horizon = SolverConfig().horizon(unit_mean)
    assert classify_t1(unit_mean, ratio21, low, horizon).verdict is Verdict.VIOLATES_POSITIVE
    assert classify_t1(unit_mean, ratio21, high, horizon).verdict is Verdict.VIOLATES_DECREASING


def test_valid_window_at_glass_ratio(unit_mean, ratio217):
    result = solve(unit_mean, ratio217, SolverConfig(horizon_multiplier=3.0))
    assert 0.5815 <= result.t1_star <= 0.5830
    assert len(result.schedule) >= 15


@pytest.mark.parametrize("ratio, expected", [(21.0, T1_STAR_21), (21.7, T1_STAR_217)])
def test_t1_star_against_high_precision_oracle(unit_mean, ratio, expected):
    assert shooting_t1(ratio) == pytest.approx(expected, abs=1e-9)
    result = solve(unit_mean, PenaltyWeights.from_ratio(ratio))
    assert result.t1_star == pytest.approx(expected, abs=1e-9)


def test_bracket_trace_is_monotone_and_halves(unit_mean, ratio21):
    result = solve(unit_mean, ratio21)
    trace = result.bracket_trace
    width0 = trace[0].high - trace[0].low
    horizon = result.horizon
    for i, (a, b) in enumerate(zip(trace, trace[1:]), start=1):
        assert b.low >= a.low and b.high <= a.high
        # exact halving up to rounding of the midpoint (a few ulps of t1)
        assert abs((b.high - b.low) - width0 / 2**i) <= 4 * math.ulp(b.high)
    for step in trace:
        assert classify_t1(unit_mean, ratio21, step.low, horizon).verdict is Verdict.VIOLATES_POSITIVE
        assert classify_t1(unit_mean, ratio21, step.high, horizon).verdict is Verdict.VIOLATES_DECREASING
    assert result.iterations == len(trace)


def test_penalty_is_minimal_over_t1(unit_mean, ratio21):
    cfg = SolverConfig(horizon_multiplier=3.0)
    result = solve(unit_mean, ratio21, cfg)
    for delta in (1e-4, -1e-4, 1e-3, -1e-3):
        s = generate(unit_mean, ratio21, result.t1_star + delta, result.horizon)
        if s.is_valid:
            other = penalty_components(append_tail(s, unit_mean, cfg.eps), unit_mean, ratio21)
            assert result.penalty <= other.penalty


def test_deterministic(unit_mean, ratio21):
    a, b = solve(unit_mean, ratio21), solve(unit_mean, ratio21)
    assert a.t1_star == b.t1_star
    assert a.schedule == b.schedule
    assert a.penalty == b.penalty


def test_scale_covariance():
    base = solve(Rayleigh.from_mean(1.0), PenaltyWeights(1.0, 21.0))
    scaled = solve(Rayleigh.from_mean(2.0), PenaltyWeights(2.0, 21.0))
    assert scaled.t1_star == 2 * base.t1_star
    assert scaled.schedule.instants == tuple(2 * t for t in base.schedule.instants)


def test_default_tolerance_degrades_at_six_means(unit_mean, ratio21):
    loose = solve(unit_mean, ratio21)
    tight = solve(unit_mean, ratio21, SolverConfig(t1_tolerance=1e-15))
    assert loose.degraded and not tight.degraded
    assert tight.schedule.last >= tight.horizon
    assert loose.breakdown.truncation_bound < 1e-9
    assert abs(loose.penalty - tight.penalty) <= loose.breakdown.truncation_bound + 1e-12 * tight.penalty


def test_iteration_cap_raises_with_trace(unit_mean, ratio21):
    with pytest.raises(ConvergenceError) as info:
        solve(unit_mean, ratio21, SolverConfig(max_iterations=3))
    assert len(info.value.trace) == 3


def test_no_valid_window(unit_mean, ratio21, monkeypatch):
    monkeypatch.setattr(solver_mod, "MAX_EXPANSIONS", 1)
    with pytest.raises(NoValidWindowError):
        initial_bracket(unit_mean, PenaltyWeights.from_ratio(1e-3))


def test_explicit_bracket(unit_mean, ratio21):
    result = solve(unit_mean, ratio21, SolverConfig(bracket=(0.5, 0.7)))
    assert result.t1_star == pytest.approx(T1_STAR_21, abs=1e-9)
    assert result.bracket_trace[0].low == 0.5


def test_classify_beyond_horizon(unit_mean, ratio21):
    assert classify_t1(unit_mean, ratio21, 10.0, 6.0).verdict is Verdict.VIOLATES_DECREASING


@pytest.mark.parametrize("kwargs", [
    dict(horizon_multiplier=1.0), dict(eps=0.0), dict(bracket=(0.7, 0.5)),
    dict(t1_tolerance=0.0), dict(max_iterations=0),
])
def test_config_validation(kwargs):
    with pytest.raises(ParameterError):
        SolverConfig(**kwargs)


@pytest.mark.parametrize("mean", [0.3, 1.0, 4.846, 25.0])
@pytest.mark.parametrize("ratio", [5.0, 21.7, 300.0])
def test_solves_across_parameters(mean, ratio):
    result = solve(Rayleigh.from_mean(mean), PenaltyWeights.from_ratio(ratio))
    assert result.schedule.is_valid
    assert math.isfinite(result.penalty)
    assert result.breakdown.truncation_bound < 1e-6 * result.penalty
