"""
Seeded Monte Carlo simulation of monitoring cycles.

Each cycle draws a time-to-event ``T`` by inverse-CCDF transform, finds the
first sample at or after it and books

    E_r = alpha S + beta W                                        (penalty)
    E   = (S+1) tau_c P_c + (T + W + tau_s + 2 tau_c - (S+1) tau_c) P_0

The full-energy expression carries an ``S+1`` communication term while the
penalty carries ``S``; both are kept exactly in that form, so
``E - E_r = (T + tau_c + tau_s) P_0 + tau_c P_c`` per cycle.

Random numbers: cycles are split into fixed blocks of :data:`BLOCK_SIZE`;
block ``k`` draws from ``numpy.random.Philox`` (Philox4x64-10, a
counter-based generator) keyed by ``SeedSequence([seed, k])``. Block
statistics are merged in block order, so the report is bit-identical for a
given seed regardless of how many workers process the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .dist import TteDistribution
from .errors import BeyondTail, ContractError, ParameterError
from .schedule import DeviceProfile, Schedule

BLOCK_SIZE = 1 << 16
Z99 = NormalDist().inv_cdf(0.995)


@dataclass(frozen=True)
class CycleOutcome:
    tte: float
    samples: int
    wait: float
    penalty_energy: float
    full_energy: float


@dataclass(frozen=True)
class SimReport:
    """Aggregated cycle statistics.

    ``*_se`` are standard errors; ``*_ci`` are 99% normal-approximation
    confidence half-widths. ``beyond_tail_count`` counts redrawn
    realisations that fell past the tail sample.
    """

    cycles: int
    seed: int
    mean_samples: float
    se_samples: float
    mean_wait: float
    se_wait: float
    mean_penalty: float
    ci_penalty: float
    mean_full_energy: float
    ci_full_energy: float
    mean_tte: float
    se_tte: float
    beyond_tail_count: int
    alpha: float
    beta: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def resolve_cycle(s: Schedule, t: float) -> tuple[int, float]:
    """Index of the successful sample and the wait for an event at ``t``."""
    if not t > 0:
        raise ParameterError(f"event time must be positive, got {t!r}")
    points = s.all_instants()
    i = int(np.searchsorted(points, t, side="left"))
    if i == len(points):
        raise BeyondTail(f"event at {t!r} after last sample {points[-1]!r}")
    return i + 1, points[i] - t


def cycle_outcome(s: Schedule, profile: DeviceProfile, t: float) -> CycleOutcome:
    samples, wait = resolve_cycle(s, t)
    w = profile.weights()
    return CycleOutcome(t, samples, wait, w.alpha * samples + w.beta * wait,
                        _full_energy(profile, samples, wait, t))


def _full_energy(profile: DeviceProfile, samples, wait, tte):
    tc, ts, pc, p0 = profile.tau_c, profile.tau_s, profile.p_c, profile.p_0
    return (samples + 1) * tc * pc + (tte + wait + ts + 2 * tc - (samples + 1) * tc) * p0


def _check_processing_delay(s: Schedule, profile: DeviceProfile) -> None:
    for n, gap in enumerate(s.intervals(), start=1):
        if not profile.tau_s < gap:
            raise ContractError(
                f"processing delay {profile.tau_s!r} s is not below interval "
                f"t_{n - 1} -> t_{n} of {gap!r} s")


@dataclass
class _Moments:
    count: int
    mean: np.ndarray
    m2: np.ndarray
    beyond: int

    def merge(self, other: "_Moments") -> "_Moments":
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / n)
        m2 = self.m2 + other.m2 + delta**2 * (self.count * other.count / n)
        return _Moments(n, mean, m2, self.beyond + other.beyond)


def _block(points: np.ndarray, d: TteDistribution, profile: DeviceProfile, seed: int,
           index: int, size: int) -> _Moments:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))
    eps = float(d.ccdf(points[-1]))
    u = 1.0 - rng.random(size)  # (0, 1]
    beyond = 0
    bad = u < eps
    while bad.any():
        beyond += int(bad.sum())
        u[bad] = 1.0 - rng.random(int(bad.sum()))
        bad = u < eps
    tte = np.asarray(d.inverse_ccdf(np.minimum(u, np.nextafter(1.0, 0.0))), dtype=float)
    tte[u == 1.0] = np.finfo(float).tiny
    idx = np.searchsorted(points, tte, side="left")
    samples = idx + 1.0
    wait = points[idx] - tte
    w = profile.weights()
    penalty = w.alpha * samples + w.beta * wait
    full = _full_energy(profile, samples, wait, tte)
    data = np.stack([samples, wait, penalty, full, tte])
    mean = data.mean(axis=1)
    m2 = ((data - mean[:, None]) ** 2).sum(axis=1)
    return _Moments(size, mean, m2, beyond)


def simulate(s: Schedule, d: TteDistribution, profile: DeviceProfile, cycles: int, seed: int,
             workers: int = 1) -> SimReport:
    """Simulate ``cycles`` monitoring cycles of schedule ``s``.

    The schedule must be valid and carry a tail sample, and the processing
    delay must be shorter than every sampling interval. Realisations past
    the tail are redrawn and counted.
    """
    if not (isinstance(cycles, (int, np.integer)) and cycles >= 1):
        raise ParameterError(f"cycles must be a positive integer, got {cycles!r}")
    if not s.is_valid or s.tail_instant is None:
        raise ContractError("simulation needs a valid schedule with a tail instant")
    _check_processing_delay(s, profile)
    points = np.asarray(s.all_instants(), dtype=float)
    sizes = [BLOCK_SIZE] * (cycles // BLOCK_SIZE)
    if cycles % BLOCK_SIZE:
        sizes.append(cycles % BLOCK_SIZE)
    job = lambda k: _block(points, d, profile, int(seed), k, sizes[k])
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    else:
        parts = [job(k) for k in range(len(sizes))]
    total = parts[0]
    for part in parts[1:]:
        total = total.merge(part)
    var = total.m2 / max(total.count - 1, 1)
    se = np.sqrt(var / total.count)
    w = profile.weights()
    return SimReport(
        cycles=int(cycles), seed=int(seed),
        mean_samples=float(total.mean[0]), se_samples=float(se[0]),
        mean_wait=float(total.mean[1]), se_wait=float(se[1]),
        mean_penalty=float(total.mean[2]), ci_penalty=float(Z99 * se[2]),
        mean_full_energy=float(total.mean[3]), ci_full_energy=float(Z99 * se[3]),
        mean_tte=float(total.mean[4]), se_tte=float(se[4]),
        beyond_tail_count=total.beyond, alpha=w.alpha, beta=w.beta,
    )


def full_energy_offset(d: TteDistribution, profile: DeviceProfile) -> float:
    """Expected ``E - E_r``: the energy terms no sampling policy can change."""
    return (d.mean + profile.tau_c + profile.tau_s) * profile.p_0 + profile.tau_c * profile.p_c
