"""
Sampling schedules generated by the first-order optimality recursion.

Given ``t_{n-1}`` and ``t_n``, the stationary point of the expected
penalty in ``t_n`` fixes the next instant::

    t_{n+1} = t_n + (F(t_n) - F(t_{n-1})) / f(t_n) - alpha / beta

Starting from ``t_0 = 0`` and a trial ``t_1`` this yields the whole
sequence. A sequence is *valid* when its intervals stay strictly positive
and strictly decreasing; :func:`generate` iterates until a horizon is
passed or one of the two conditions breaks and reports which.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .dist import TteDistribution
from .errors import ContractError, ParameterError, RecursionOverflow

#: Hard cap on the number of instants one call to :func:`generate` may emit.
MAX_INSTANTS = 1_000_000


@dataclass(frozen=True)
class PenaltyWeights:
    """Energy per sample ``alpha`` (J) and idle power ``beta`` (W).

    ``normalized`` marks weights built from a bare ratio, where alpha is
    pinned to 1 J and absolute values carry no physical meaning.
    """

    alpha: float
    beta: float
    normalized: bool = False

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be positive, got {value!r}")

    @classmethod
    def from_ratio(cls, beta_over_alpha: float) -> "PenaltyWeights":
        return cls(alpha=1.0, beta=float(beta_over_alpha), normalized=True)

    @property
    def ratio(self) -> float:
        """beta / alpha, in 1/s."""
        return self.beta / self.alpha

    @property
    def offset(self) -> float:
        """alpha / beta, the constant shift in the recursion (seconds)."""
        return self.alpha / self.beta


@dataclass(frozen=True)
class DeviceProfile:
    """Terminal timing and power characteristics.

    Attributes are the one-way communication delay ``tau_c`` (s), the
    back-end processing delay ``tau_s`` (s), the communication power
    ``p_c`` (W) and the idle power ``p_0`` (W).
    """

    tau_c: float
    tau_s: float
    p_c: float
    p_0: float

    def __post_init__(self):
        for name in ("tau_c", "tau_s", "p_c", "p_0"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be positive, got {value!r}")
        if not self.p_c > self.p_0:
            raise ParameterError(f"p_c ({self.p_c}) must exceed p_0 ({self.p_0})")

    def weights(self) -> PenaltyWeights:
        return PenaltyWeights(alpha=self.tau_c * (self.p_c - self.p_0), beta=self.p_0)


# Wearable-assistant parameters: 300 kB frames over 802.11ax, idle and
# video-chat power draw. tau_s is not characterised there; 10 ms is a
# placeholder that only shifts the full-energy constant.
GOOGLE_GLASS = DeviceProfile(tau_c=5.85e-3, tau_s=10e-3, p_c=2.96, p_0=0.334)


class Verdict(enum.Enum):
    VALID = "valid"
    VIOLATES_POSITIVE = "violates_positive"
    VIOLATES_DECREASING = "violates_decreasing"


@dataclass(frozen=True)
class Schedule:
    """Sampling instants ``t_1 < ... < t_N`` with a validity verdict.

    ``instants`` always holds the prefix that satisfies both interval
    conditions. For an invalid sequence ``violation_index`` is the ``n``
    at which ``t_{n+1}`` broke a condition and ``rejected`` is that
    offending value. ``tail_instant`` is an optional final catch-all
    sample placed far in the TTE tail.
    """

    instants: tuple[float, ...]
    verdict: Verdict = Verdict.VALID
    violation_index: Optional[int] = None
    rejected: Optional[float] = None
    tail_instant: Optional[float] = None

    def __post_init__(self):
        if self.tail_instant is not None and self.instants and not self.tail_instant > self.instants[-1]:
            raise ParameterError(
                f"tail instant {self.tail_instant!r} must exceed last instant {self.instants[-1]!r}")

    @property
    def is_valid(self) -> bool:
        return self.verdict is Verdict.VALID

    @property
    def last(self) -> float:
        return self.instants[-1]

    def __len__(self) -> int:
        return len(self.instants)

    def all_instants(self) -> tuple[float, ...]:
        """Instants followed by the tail sample, when present."""
        if self.tail_instant is None:
            return self.instants
        return self.instants + (self.tail_instant,)

    def intervals(self) -> list[float]:
        points = (0.0,) + self.all_instants()
        return [b - a for a, b in zip(points, points[1:])]


def next_instant(d: TteDistribution, w: PenaltyWeights, t_prev: float, t_curr: float,
                 *, generic: bool = False) -> float:
    """One step of the optimality recursion.

    ``generic=True`` forces the family-agnostic CDF/PDF path instead of the
    distribution's own closed form (used to cross-check the fast path).
    Raises :class:`RecursionOverflow` when the Rayleigh exponential would
    overflow and :class:`SingularityError` on a vanishing density.
    """
    if not 0.0 <= t_prev < t_curr:
        raise ParameterError(f"need 0 <= t_prev < t_curr, got {t_prev!r}, {t_curr!r}")
    if generic:
        increment = TteDistribution.recursion_increment(d, t_prev, t_curr)
    else:
        increment = d.recursion_increment(t_prev, t_curr)
    return t_curr + increment - w.offset


def classify(instants: Sequence[float]) -> tuple[Verdict, Optional[int]]:
    """Check the interval conditions on an explicit instant list.

    Returns the verdict and, for violations, the index ``n`` such that
    ``t_{n+1}`` is the first offending instant (``t_0 = 0`` implied).
    """
    prev_gap = math.inf
    prev = 0.0
    for n, t in enumerate(instants):
        gap = t - prev
        if gap <= 0.0:
            return Verdict.VIOLATES_POSITIVE, n
        if gap >= prev_gap:
            return Verdict.VIOLATES_DECREASING, n
        prev_gap, prev = gap, t
    return Verdict.VALID, None


def generate(d: TteDistribution, w: PenaltyWeights, t1: float, horizon: float) -> Schedule:
    """Run the recursion from ``(0, t1)`` until an instant reaches ``horizon``.

    The last listed instant of a valid result may exceed ``horizon``. An
    exact tie between consecutive intervals counts as a decreasing-interval
    violation, and so does overflow of the recursion.
    """
    if not (math.isfinite(t1) and t1 > 0):
        raise ParameterError(f"t1 must be positive, got {t1!r}")
    if not horizon > t1:
        raise ParameterError(f"horizon {horizon!r} must exceed t1 {t1!r}")
    ts = [t1]
    prev = 0.0
    while ts[-1] < horizon:
        n = len(ts)
        if n >= MAX_INSTANTS:
            raise ContractError(f"recursion exceeded {MAX_INSTANTS} instants before the horizon")
        curr = ts[-1]
        try:
            nxt = next_instant(d, w, prev, curr)
        except RecursionOverflow:
            return Schedule(tuple(ts), Verdict.VIOLATES_DECREASING, n, math.inf)
        gap, prev_gap = nxt - curr, curr - prev
        if gap <= 0.0:
            return Schedule(tuple(ts), Verdict.VIOLATES_POSITIVE, n, nxt)
        if gap >= prev_gap:
            return Schedule(tuple(ts), Verdict.VIOLATES_DECREASING, n, nxt)
        ts.append(nxt)
        prev = curr
    return Schedule(tuple(ts), Verdict.VALID)


def trajectory(d: TteDistribution, w: PenaltyWeights, t1: float, count: int) -> list[float]:
    """Raw recursion output ``t_1..t_count`` without validity checks.

    Once the sequence leaves the domain (a nonpositive instant) the rest is
    padded with ``-inf``; once the exponential overflows it is padded with
    ``+inf``. Both paddings respect the ordering of the underlying
    sequences, so trajectories stay comparable elementwise.
    """
    ts = [float(t1)]
    prev = 0.0
    while len(ts) < count:
        curr = ts[-1]
        if not math.isfinite(curr):
            ts.append(curr)
            continue
        if curr <= 0.0:
            ts.append(-math.inf)
            continue
        try:
            nxt = curr + d.recursion_increment(prev, curr) - w.offset
        except RecursionOverflow:
            nxt = math.inf
        prev = curr
        ts.append(nxt)
    return ts


def append_tail(s: Schedule, d: TteDistribution, eps: float) -> Schedule:
    """Copy of ``s`` with a final sample at the ``eps`` CCDF quantile."""
    if not s.is_valid:
        raise ContractError(f"cannot append a tail to a {s.verdict.value} schedule")
    tail = float(d.inverse_ccdf(eps))
    if s.instants and not tail > s.last:
        raise ParameterError(
            f"tail quantile {tail!r} at eps={eps!r} does not exceed last instant {s.last!r}")
    return replace(s, tail_instant=tail)


def from_instants(instants: Sequence[float], tail_instant: Optional[float] = None) -> Schedule:
    """Build a schedule from explicit instants, classifying them."""
    instants = tuple(float(t) for t in instants)
    if not instants:
        raise ParameterError("schedule needs at least one instant")
    verdict, index = classify(instants)
    if verdict is not Verdict.VALID:
        return Schedule(instants[:index], verdict, index, instants[index])
    return Schedule(instants, verdict, tail_instant=tail_instant)
