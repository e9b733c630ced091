"""Energy-optimal aperiodic sampling for edge feedback systems."""

from .comparators import PeriodicPolicy, optimal_period, periodic_penalty_components
from .dist import Rayleigh, TteDistribution, from_mean
from .penalty import PenaltyBreakdown, penalty_components, stationarity_residual, truncation_error_bound
from .schedule import (
    GOOGLE_GLASS,
    DeviceProfile,
    PenaltyWeights,
    Schedule,
    Verdict,
    append_tail,
    generate,
    next_instant,
)
from .sim import SimReport, resolve_cycle, simulate
from .solver import SolverConfig, SolverResult, initial_bracket, solve

__version__ = "0.1.0"

__all__ = [
    "DeviceProfile", "GOOGLE_GLASS", "PenaltyBreakdown", "PenaltyWeights", "PeriodicPolicy",
    "Rayleigh", "Schedule", "SimReport", "SolverConfig", "SolverResult", "TteDistribution",
    "Verdict", "append_tail", "from_mean", "generate", "initial_bracket", "next_instant",
    "optimal_period", "penalty_components", "periodic_penalty_components", "resolve_cycle",
    "simulate", "solve", "stationarity_residual", "truncation_error_bound",
]
