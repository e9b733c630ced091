"""
Scenario files: one JSON document describing a run.

Schema (version 1)::

    {
      "schema_version": 1,
      "distribution": {"family": "rayleigh", "mean": 4.846},      # or "sigma"
      "device": {"tau_c": 0.00585, "tau_s": 0.01, "p_c": 2.96, "p_0": 0.334},
      "weights": {"alpha": 1.0, "beta": 21.7},                    # instead of device
      "solver": {"horizon_multiplier": 6, "eps": 1e-22, "bracket": [lo, hi],
                 "t1_tolerance": null, "max_iterations": 200},
      "baseline_period": 0.0833,
      "periodic_search": {"t_min": null, "t_max": null, "tolerance": null},
      "sim": {"cycles": 1000000, "seed": 1}
    }

Exactly one of ``device`` and ``weights`` must be present. Unknown keys
are rejected with the dotted path of the offending field.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Any, Optional

from .comparators import BASELINE_PERIOD
from .dist import TteDistribution, from_mean, from_params
from .errors import ParameterError, SamplingError
from .schedule import DeviceProfile, PenaltyWeights
from .solver import SolverConfig

SCHEMA_VERSION = 1


class ScenarioError(SamplingError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class SimSettings:
    cycles: int = 100_000
    seed: int = 0


@dataclass(frozen=True)
class PeriodicSearch:
    t_min: Optional[float] = None
    t_max: Optional[float] = None
    tolerance: Optional[float] = None


@dataclass(frozen=True)
class Scenario:
    family: str
    mean: float
    distribution: TteDistribution
    weights: PenaltyWeights
    device: Optional[DeviceProfile] = None
    solver: SolverConfig = field(default_factory=SolverConfig)
    baseline_period: float = BASELINE_PERIOD
    periodic_search: PeriodicSearch = field(default_factory=PeriodicSearch)
    sim: Optional[SimSettings] = None

    def with_mean(self, mean: float) -> "Scenario":
        return replace(self, mean=mean, distribution=from_mean(self.family, mean))

    def with_device(self, device: DeviceProfile) -> "Scenario":
        return replace(self, device=device, weights=device.weights())

    def echo(self) -> dict:
        """Normalised, JSON-ready view of the scenario."""
        out: dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "distribution": {"family": self.family, "mean": self.mean, **self.distribution.params()},
        }
        if self.device is not None:
            out["device"] = dict(self.device.__dict__)
        out["weights"] = {"alpha": self.weights.alpha, "beta": self.weights.beta,
                          "normalized": self.weights.normalized}
        cfg = self.solver
        out["solver"] = {
            "horizon_multiplier": cfg.horizon_multiplier, "eps": cfg.eps,
            "bracket": list(cfg.bracket) if cfg.bracket else None,
            "t1_tolerance": cfg.t1_tolerance, "max_iterations": cfg.max_iterations,
        }
        out["baseline_period"] = self.baseline_period
        out["periodic_search"] = dict(self.periodic_search.__dict__)
        if self.sim is not None:
            out["sim"] = dict(self.sim.__dict__)
        return out


def _number(value, path, *, positive=True, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(path, f"expected a number, got {value!r}")
    if integer and not isinstance(value, int):
        raise ScenarioError(path, f"expected an integer, got {value!r}")
    if not math.isfinite(value) or (positive and value <= 0):
        raise ScenarioError(path, f"expected a positive finite number, got {value!r}")
    return value


def _section(doc, key, allowed, path=""):
    value = doc[key]
    where = f"{path}{key}"
    if not isinstance(value, dict):
        raise ScenarioError(where, "expected an object")
    for k in value:
        if k not in allowed:
            raise ScenarioError(f"{where}.{k}", "unknown key")
    return value


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("$", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ScenarioError("$", "top level must be an object")
    allowed = {"schema_version", "distribution", "device", "weights", "solver",
               "baseline_period", "periodic_search", "sim"}
    for k in doc:
        if k not in allowed:
            raise ScenarioError(k, "unknown key")
    if "schema_version" not in doc:
        raise ScenarioError("schema_version", "missing (required)")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ScenarioError("schema_version", f"unsupported version {doc['schema_version']!r}")

    if "distribution" not in doc:
        raise ScenarioError("distribution", "missing (required)")
    dist_doc = _section(doc, "distribution", {"family", "mean", "sigma"})
    family = dist_doc.get("family", "rayleigh")
    if ("mean" in dist_doc) == ("sigma" in dist_doc):
        raise ScenarioError("distribution", "give exactly one of 'mean' or 'sigma'")
    try:
        if "mean" in dist_doc:
            distribution = from_mean(family, _number(dist_doc["mean"], "distribution.mean"))
        else:
            distribution = from_params(family, sigma=_number(dist_doc["sigma"], "distribution.sigma"))
    except ParameterError as exc:
        raise ScenarioError("distribution.family", str(exc)) from None

    if ("device" in doc) == ("weights" in doc):
        raise ScenarioError("device|weights", "give exactly one of 'device' or 'weights'")
    device = None
    if "device" in doc:
        dev = _section(doc, "device", {"tau_c", "tau_s", "p_c", "p_0"})
        for k in ("tau_c", "tau_s", "p_c", "p_0"):
            if k not in dev:
                raise ScenarioError(f"device.{k}", "missing (required)")
            _number(dev[k], f"device.{k}")
        try:
            device = DeviceProfile(**dev)
        except ParameterError as exc:
            raise ScenarioError("device", str(exc)) from None
        weights = device.weights()
    else:
        wd = _section(doc, "weights", {"alpha", "beta"})
        for k in ("alpha", "beta"):
            if k not in wd:
                raise ScenarioError(f"weights.{k}", "missing (required)")
        weights = PenaltyWeights(_number(wd["alpha"], "weights.alpha"),
                                 _number(wd["beta"], "weights.beta"), normalized=True)

    solver = SolverConfig()
    if "solver" in doc:
        sd = dict(_section(doc, "solver", {"horizon_multiplier", "eps", "bracket", "t1_tolerance",
                                           "max_iterations"}))
        if sd.get("bracket") is not None:
            br = sd["bracket"]
            if not (isinstance(br, list) and len(br) == 2):
                raise ScenarioError("solver.bracket", "expected [low, high]")
            sd["bracket"] = (_number(br[0], "solver.bracket[0]"), _number(br[1], "solver.bracket[1]"))
        for k in ("horizon_multiplier", "eps", "t1_tolerance"):
            if sd.get(k) is not None:
                _number(sd[k], f"solver.{k}")
        if "max_iterations" in sd:
            _number(sd["max_iterations"], "solver.max_iterations", integer=True)
        try:
            solver = SolverConfig(**sd)
        except ParameterError as exc:
            raise ScenarioError("solver", str(exc)) from None

    baseline = _number(doc.get("baseline_period", BASELINE_PERIOD), "baseline_period")

    search = PeriodicSearch()
    if "periodic_search" in doc:
        ps = _section(doc, "periodic_search", {"t_min", "t_max", "tolerance"})
        for k, v in ps.items():
            if v is not None:
                _number(v, f"periodic_search.{k}")
        search = PeriodicSearch(**ps)

    sim = None
    if "sim" in doc:
        sd = _section(doc, "sim", {"cycles", "seed"})
        sim = SimSettings(
            cycles=_number(sd.get("cycles", SimSettings.cycles), "sim.cycles", integer=True),
            seed=_number(sd.get("seed", SimSettings.seed), "sim.seed", positive=False, integer=True),
        )

    return Scenario(family=distribution.family, mean=distribution.mean, distribution=distribution,
                    weights=weights, device=device, solver=solver, baseline_period=baseline,
                    periodic_search=search, sim=sim)


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())
