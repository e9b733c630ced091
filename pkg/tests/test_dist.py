import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from edgesampling.dist import Rayleigh, UNDERFLOW, TteDistribution, from_mean
from edgesampling.errors import DomainError, ParameterError


def quad_mean(d):
    value, _ = integrate.quad(lambda t: t * d.pdf(t), 0, math.inf, epsabs=0, epsrel=1e-12, limit=200)
    return value


@pytest.mark.parametrize("mean, sigma", [(4.846, 3.8665), (1.0, 0.79788)])
def test_from_mean_recovers_mean(mean, sigma):
    d = from_mean("rayleigh", mean)
    assert d.sigma == pytest.approx(sigma, abs=1e-4)
    assert quad_mean(d) == pytest.approx(mean, rel=1e-10)


@pytest.mark.parametrize("mean", [0.0, -1.0, math.nan, math.inf])
def test_from_mean_rejects_bad_mean(mean):
    with pytest.raises(ParameterError):
        from_mean("rayleigh", mean)


def test_unknown_family():
    with pytest.raises(ParameterError):
        from_mean("weibull", 1.0)


def test_eval_closed_forms():
    v = Rayleigh(1.0).eval(1.0)
    assert v.cdf == pytest.approx(1 - math.exp(-0.5), rel=1e-15)
    assert v.cdf == pytest.approx(0.3935, abs=1e-4)
    assert v.cdf + v.ccdf == pytest.approx(1.0, abs=1e-16)
    assert v.hazard == pytest.approx(v.pdf / v.ccdf, rel=1e-14)


@pytest.mark.parametrize("sigma", [0.1, 1.0, 37.0])
def test_eval_at_zero(sigma):
    v = Rayleigh(sigma).eval(0.0)
    assert (v.pdf, v.cdf, v.ccdf, v.hazard) == (0.0, 0.0, 1.0, 0.0)


def test_hazard_is_linear():
    d = Rayleigh(1.0)
    assert d.eval(2.0).hazard == 2.0 > d.eval(1.0).hazard == 1.0


def test_eval_rejects_negative_time():
    with pytest.raises(DomainError):
        Rayleigh(1.0).eval(-1e-9)


def test_eval_flags_underflow():
    v = Rayleigh(1.0).eval(40.0)  # ccdf = exp(-800)
    assert v.underflow and v.ccdf == 0.0 and v.cdf == 1.0 and v.hazard == math.inf
    assert not Rayleigh(1.0).eval(30.0).underflow  # exp(-450) > 1e-300


def test_inverse_ccdf_closed_form():
    assert Rayleigh(1.0).inverse_ccdf(math.exp(-0.5)) == pytest.approx(1.0, rel=1e-15)


def test_inverse_ccdf_deep_tail(unit_mean):
    t = unit_mean.inverse_ccdf(1e-22)
    assert t == pytest.approx(8.03, abs=5e-3)
    assert unit_mean.ccdf(t) == pytest.approx(1e-22, rel=1e-10)


def test_six_means_tail_probability(unit_mean):
    # ccdf(6 mu) = exp(-9 pi) for any Rayleigh scale
    assert unit_mean.ccdf(6.0) == pytest.approx(5.2e-13, rel=0.02)
    assert unit_mean.ccdf(6.0) == pytest.approx(math.exp(-9 * math.pi), rel=1e-12)


@pytest.mark.parametrize("eps", [0.0, 1.0, -0.1, 1.5])
def test_inverse_ccdf_domain(eps):
    with pytest.raises(ParameterError):
        Rayleigh(1.0).inverse_ccdf(eps)


def test_partial_expectation_full_range_is_mean():
    for sigma in (0.01, 0.5, 1.0, 3.8665, 120.0):
        d = Rayleigh(sigma)
        assert abs(d.partial_expectation(0.0, math.inf) - d.mean) < 1e-8 * d.mean


def test_partial_expectation_empty_interval(unit_mean):
    assert unit_mean.partial_expectation(0.7, 0.7) == 0.0


def test_partial_expectation_rejects_reversed(unit_mean):
    with pytest.raises(ParameterError):
        unit_mean.partial_expectation(2.0, 1.0)


def test_partial_expectation_against_quadrature():
    d = Rayleigh(1.0)
    ref, _ = integrate.quad(lambda t: t * d.pdf(t), 0, 1, epsabs=0, epsrel=1e-13)
    assert d.partial_expectation(0.0, 1.0) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("a, b", [(0.0, 0.3), (0.5, 2.0), (3.0, 4.5), (6.0, 8.0), (7.9, 8.03), (2.0, math.inf)])
def test_partial_expectation_high_precision(a, b):
    sigma = math.sqrt(2 / math.pi)
    d = Rayleigh(sigma)
    with mp.workdps(40):
        s = mp.mpf(sigma)
        ref = mp.quad(lambda t: t * t / s**2 * mp.exp(-t * t / (2 * s**2)), [a, b])
    assert d.partial_expectation(a, b) == pytest.approx(float(ref), rel=1e-12)


def test_partial_expectation_near_zero_matches_series():
    d = Rayleigh(1.0)
    with mp.workdps(40):
        ref = mp.quad(lambda t: t * t * mp.exp(-t * t / 2), [mp.mpf("1e-4"), mp.mpf("1.2e-3")])
    assert d.partial_expectation(1e-4, 1.2e-3) == pytest.approx(float(ref), rel=1e-12)
    assert d.partial_expectation(1e-3, 2e-3) == pytest.approx(
        TteDistribution.partial_expectation(d, 1e-3, 2e-3), rel=1e-9)


def test_generic_fallbacks_match_closed_forms():
    """The base-class quadrature and root finding agree with the Rayleigh closed forms."""
    d = Rayleigh(1.3)
    assert TteDistribution.partial_expectation(d, 0.2, 2.5) == pytest.approx(d.partial_expectation(0.2, 2.5), rel=1e-10)
    for eps in (0.5, 1e-3, 1e-12):
        assert TteDistribution.inverse_ccdf(d, eps) == pytest.approx(d.inverse_ccdf(eps), rel=1e-10)


def test_inverse_round_trip_grid():
    for sigma in (0.2, 1.0, 7.5):
        d = Rayleigh(sigma)
        ts = np.geomspace(0.01 * sigma, 10 * sigma, 200)
        back = d.inverse_ccdf(d.ccdf(ts))
        assert np.max(np.abs(back - ts) / ts) < 1e-9


def test_hazard_nondecreasing_grid():
    d = Rayleigh(2.0)
    h = [d.eval(t).hazard for t in np.linspace(0, 30, 1000)]
    assert all(b >= a for a, b in zip(h, h[1:]))
    assert d.has_increasing_hazard


@settings(max_examples=200, deadline=None)
@given(sigma=st.floats(1e-3, 1e3), x=st.floats(0.0, 8.0), y=st.floats(0.0, 8.0))
def test_distribution_invariants(sigma, x, y):
    d = Rayleigh(sigma)
    lo, hi = sorted((x * sigma, y * sigma))
    a, b = d.eval(lo), d.eval(hi)
    assert a.pdf >= 0 and b.pdf >= 0
    assert a.cdf <= b.cdf
    assert a.cdf + a.ccdf == pytest.approx(1.0, abs=1e-15)
    assert a.hazard <= b.hazard
    assert 0.0 <= d.partial_expectation(lo, hi) <= d.mean * (1 + 1e-12)


def test_rejects_bad_sigma():
    for sigma in (0.0, -2.0, math.inf, math.nan):
        with pytest.raises(ParameterError):
            Rayleigh(sigma)


def test_underflow_constant():
    assert UNDERFLOW == 1e-300
