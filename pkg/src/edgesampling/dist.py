"""
Time-to-event (TTE) distributions.

Every model exposes the handful of analytic quantities the rest of the
package needs: density, CDF, CCDF, hazard, quantile of the CCDF and the
partial expectation ``int_a^b t f(t) dt``. :class:`TteDistribution`
supplies generic numeric fallbacks (adaptive quadrature, root finding),
so a new family only has to implement ``pdf``, ``ccdf`` and ``mean``.
The Rayleigh family overrides everything with closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from scipy import integrate, optimize, special

from .errors import DomainError, ParameterError, RecursionOverflow, SingularityError

#: Probabilities below this are clamped to zero and flagged.
UNDERFLOW = 1e-300


@dataclass(frozen=True)
class DistValues:
    """Point evaluation of a distribution at one instant."""

    t: float
    pdf: float
    cdf: float
    ccdf: float
    hazard: float
    underflow: bool = False


class TteDistribution:
    """Base class for time-to-event models.

    Subclasses are frozen dataclasses; instances are immutable and safe to
    share between threads.
    """

    family: ClassVar[str] = "abstract"

    # -- primitives every family provides ---------------------------------
    def pdf(self, t):
        raise NotImplementedError

    def ccdf(self, t):
        raise NotImplementedError

    @property
    def mean(self) -> float:
        raise NotImplementedError

    @classmethod
    def from_mean(cls, mean: float) -> "TteDistribution":
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    # -- derived quantities with generic fallbacks ------------------------
    def cdf(self, t):
        return 1.0 - self.ccdf(t)

    def hazard(self, t):
        return self.pdf(t) / self.ccdf(t)

    @property
    def has_increasing_hazard(self) -> bool:
        """Whether the hazard rate is known to be nondecreasing.

        A nondecreasing hazard guarantees that a valid optimal sequence
        exists; the solver refuses families for which this is False.
        """
        return False

    @property
    def median(self) -> float:
        return self.inverse_ccdf(0.5)

    def cdf_diff(self, a, b):
        """``F(b) - F(a)``, computed from CCDFs to keep tail accuracy."""
        return self.ccdf(a) - self.ccdf(b)

    def eval(self, t: float) -> DistValues:
        """Evaluate pdf, cdf, ccdf and hazard at ``t``.

        CCDF values below :data:`UNDERFLOW` are reported as 0 with
        ``underflow=True``; the hazard is then ``+inf``.
        """
        t = float(t)
        if not t >= 0.0:
            raise DomainError(f"t must be >= 0, got {t!r}")
        pdf = float(self.pdf(t))
        ccdf = float(self.ccdf(t))
        underflow = False
        if ccdf < UNDERFLOW:
            ccdf, underflow = 0.0, True
        if pdf < UNDERFLOW:
            pdf = 0.0
        if underflow:
            hazard = math.inf
        else:
            hazard = float(self.hazard(t))
        return DistValues(t=t, pdf=pdf, cdf=1.0 - ccdf, ccdf=ccdf,
                          hazard=hazard, underflow=underflow)

    def inverse_ccdf(self, eps):
        """Return ``t`` with ``ccdf(t) == eps``."""
        eps = _check_probability(eps)
        if np.ndim(eps):
            return np.array([self.inverse_ccdf(float(e)) for e in np.ravel(eps)]).reshape(np.shape(eps))
        hi = max(self.mean, 1e-12)
        while self.ccdf(hi) > eps:
            hi *= 2.0
        f = lambda t: math.log(self.ccdf(t)) - math.log(eps) if self.ccdf(t) > 0 else -math.inf
        return optimize.brentq(f, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)

    def partial_expectation(self, a: float, b: float = math.inf) -> float:
        """``int_a^b t f(t) dt`` by adaptive quadrature (relative tol 1e-10)."""
        a, b = _check_interval(a, b)
        if a == b:
            return 0.0
        value, _ = integrate.quad(lambda t: t * self.pdf(t), a, b,
                                  epsabs=0.0, epsrel=1e-10, limit=200)
        return value

    # -- recursion hook ----------------------------------------------------
    def recursion_increment(self, t_prev: float, t_curr: float) -> float:
        """``(F(t_curr) - F(t_prev)) / f(t_curr)`` for the optimality recursion."""
        density = float(self.pdf(t_curr))
        if density <= 0.0:
            raise SingularityError(f"density vanishes at t={t_curr!r}")
        return float(self.cdf_diff(t_prev, t_curr)) / density


@dataclass(frozen=True)
class Rayleigh(TteDistribution):
    """Rayleigh TTE with scale ``sigma`` (seconds).

    ``f(t) = t/sigma^2 exp(-t^2 / 2 sigma^2)``, mean ``sigma sqrt(pi/2)``,
    hazard ``t / sigma^2``.
    """

    sigma: float
    family: ClassVar[str] = "rayleigh"

    def __post_init__(self):
        if not (isinstance(self.sigma, (int, float)) and math.isfinite(self.sigma) and self.sigma > 0):
            raise ParameterError(f"sigma must be a positive finite number, got {self.sigma!r}")

    @classmethod
    def from_mean(cls, mean: float) -> "Rayleigh":
        if not (math.isfinite(mean) and mean > 0):
            raise ParameterError(f"mean must be positive, got {mean!r}")
        return cls(sigma=float(mean) * math.sqrt(2.0 / math.pi))

    def params(self) -> dict:
        return {"sigma": self.sigma}

    @property
    def mean(self) -> float:
        return self.sigma * math.sqrt(math.pi / 2.0)

    @property
    def median(self) -> float:
        return self.sigma * math.sqrt(2.0 * math.log(2.0))

    @property
    def has_increasing_hazard(self) -> bool:
        return True

    def _z(self, t):
        return np.square(t) / (2.0 * self.sigma**2)

    def pdf(self, t):
        return t / self.sigma**2 * np.exp(-self._z(t))

    def ccdf(self, t):
        return np.exp(-self._z(t))

    def cdf(self, t):
        return -np.expm1(-self._z(t))

    def hazard(self, t):
        return t / self.sigma**2

    def inverse_ccdf(self, eps):
        eps = _check_probability(eps)
        return self.sigma * np.sqrt(-2.0 * np.log(eps))

    def partial_expectation(self, a: float, b: float = math.inf) -> float:
        a, b = _check_interval(a, b)
        if a == b:
            return 0.0
        s = self.sigma
        x, y = a / (s * math.sqrt(2.0)), b / (s * math.sqrt(2.0))
        if y < 1e-3:
            # the closed form cancels catastrophically near zero; two series terms suffice
            return (b**3 - a**3) / (3.0 * s * s) - (b**5 - a**5) / (10.0 * s**4)
        # erfc difference keeps precision once both ends are in the tail
        if x > 0.5:
            gauss = special.erfc(x) - special.erfc(y)
        else:
            gauss = special.erf(y) - special.erf(x)
        boundary = a * math.exp(-x * x) - (b * math.exp(-y * y) if math.isfinite(b) else 0.0)
        return s * math.sqrt(math.pi / 2.0) * gauss + boundary

    def recursion_increment(self, t_prev: float, t_curr: float) -> float:
        if t_curr <= 0.0:
            raise SingularityError(f"density vanishes at t={t_curr!r}")
        x = (t_curr * t_curr - t_prev * t_prev) / (2.0 * self.sigma**2)
        if x > 700.0:
            raise RecursionOverflow(f"exponent {x:.1f} overflows at t={t_curr!r}")
        return self.sigma**2 / t_curr * math.expm1(x)


FAMILIES: dict[str, type[TteDistribution]] = {"rayleigh": Rayleigh}


def from_mean(family: str, mean: float) -> TteDistribution:
    """Build a distribution of ``family`` whose expected value is ``mean``."""
    return _family(family).from_mean(mean)


def from_params(family: str, **params) -> TteDistribution:
    return _family(family)(**params)


def _family(name: str) -> type[TteDistribution]:
    try:
        return FAMILIES[str(name).lower()]
    except KeyError:
        raise ParameterError(f"unknown distribution family {name!r}; known: {sorted(FAMILIES)}") from None


def _check_probability(eps):
    arr = np.asarray(eps, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise ParameterError(f"probability must lie in (0, 1), got {eps!r}")
    return float(arr) if arr.ndim == 0 else arr


def _check_interval(a: float, b: float) -> tuple[float, float]:
    a, b = float(a), float(b)
    if not a >= 0.0:
        raise DomainError(f"lower limit must be >= 0, got {a!r}")
    if a > b:
        raise ParameterError(f"empty interval: a={a!r} > b={b!r}")
    return a, b
