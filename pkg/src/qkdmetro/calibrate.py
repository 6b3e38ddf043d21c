"""Fits noise coefficients to measured anchor points.

Deterministic: a coarse log-grid scan over documented bounds followed by
coordinate-wise golden-section refinement.  Free parameters are named
strings mapped onto scenario overrides.
"""

import csv
import math
import warnings
from dataclasses import dataclass

from .errors import NoImprovement
from .keyrate import GOLDEN
from .network import evaluate_link, with_overrides

OBSERVABLES = ("qber", "secret_bps")

GRID_POINTS_PER_DECADE = 11  # 11 points per decade, endpoints included
REFINEMENT_ROUNDS = 3
NO_IMPROVEMENT_FACTOR = 25.0


@dataclass(frozen=True)
class Anchor:
    scenario: str
    length_km: float
    observable: str
    target: float
    weight: float = 1.0

    def __post_init__(self):
        if self.observable not in OBSERVABLES:
            raise ValueError(f"unknown observable {self.observable!r}")
        if self.observable == "secret_bps" and self.target < 0:
            raise ValueError("secret-rate targets must be >= 0")


@dataclass(frozen=True)
class FitParam:
    """A calibratable parameter: bounds and grid live in transformed space."""
    name: str
    lo: float
    hi: float
    log_scale: bool

    def to_x(self, value):
        return math.log10(value) if self.log_scale else value

    def from_x(self, x):
        return 10.0 ** x if self.log_scale else x

    def grid(self):
        xlo, xhi = self.to_x(self.lo), self.to_x(self.hi)
        decades = (xhi - xlo) if self.log_scale else (xhi - xlo) / 10.0
        n = max(2, round((GRID_POINTS_PER_DECADE - 1) * decades) + 1)
        return [xlo + i * (xhi - xlo) / (n - 1) for i in range(n)]


# documented bounds; launch power is fitted in dBm (log in power already)
PARAM_REGISTRY = {
    "rho": FitParam("rho", 1e-11, 1e-7, log_scale=True),
    "rho_beyond": FitParam("rho_beyond", 1e-11, 1e-7, log_scale=True),
    "launch_dbm": FitParam("launch_dbm", -20.0, 10.0, log_scale=False),
    "e_det": FitParam("e_det", 1e-3, 1e-1, log_scale=True),
    "dark_count_prob": FitParam("dark_count_prob", 1e-7, 1e-3, log_scale=True),
}

# scenario kind -> launch power override names
_LAUNCH_PARAMS = {
    "backbone": ("co_power_dbm", "counter_power_dbm"),
    "gpon": ("down_power_dbm", "up_power_dbm"),
}


def load_anchors(stream):
    reader = csv.DictReader(stream)
    required = {"scenario", "length_km", "observable", "target", "weight"}
    if set(reader.fieldnames or ()) != required:
        raise ValueError(
            "anchor CSV must have header scenario,length_km,observable,target,weight")
    return [Anchor(row["scenario"], float(row["length_km"]), row["observable"],
                   float(row["target"]), float(row["weight"])) for row in reader]


def _overrides_for(scenario_kind, values):
    overrides = {}
    for name, value in values.items():
        if name == "launch_dbm":
            for key in _LAUNCH_PARAMS[scenario_kind]:
                overrides[key] = value
        elif name == "e_det":
            overrides["misalignment_error"] = value
        else:
            overrides[name] = value
    return overrides


def apply_fit(scenario, values):
    """Scenario with fitted parameter values applied."""
    return with_overrides(scenario, **_overrides_for(scenario.kind, values))


def _observe(perf, observable):
    if observable == "qber":
        return perf.yield_gain.e_mu
    return perf.rates.secret_bps


def anchor_residuals(scenario, anchors, values):
    fitted = apply_fit(scenario, values)
    out = []
    for a in anchors:
        perf = evaluate_link(fitted, a.length_km, on_collapse="zero")
        model = _observe(perf, a.observable)
        if a.target > 0:
            out.append(a.weight * ((model - a.target) / a.target) ** 2)
        else:
            # zero-rate anchor: hinge penalty on any predicted rate
            out.append(a.weight * max(0.0, model) ** 2)
    return out


@dataclass(frozen=True)
class CalibrationResult:
    params: dict
    residual: float
    residuals: tuple
    anchors: tuple


def calibrate(scenario, anchors, free_params):
    """Fit the named free parameters to the anchors.

    Returns the fitted values together with the final weighted residual and
    the per-anchor residual breakdown.
    """
    anchors = [a for a in anchors if a.scenario == scenario.kind]
    if not anchors:
        raise ValueError("no anchors apply to this scenario")
    params = [PARAM_REGISTRY[name] for name in free_params]
    if not params:
        raise ValueError("need at least one free parameter")
    if len(anchors) < len(params):
        warnings.warn(
            f"{len(params)} free parameters but only {len(anchors)} anchors; "
            "the fit may be under-determined", stacklevel=2)

    def objective(xs):
        values = {p.name: p.from_x(x) for p, x in zip(params, xs)}
        return sum(anchor_residuals(scenario, anchors, values))

    grids = [p.grid() for p in params]
    best_x, best_val = None, math.inf
    idx = [0] * len(grids)
    while True:
        xs = [g[i] for g, i in zip(grids, idx)]
        val = objective(xs)
        if val < best_val:
            best_x, best_val = list(xs), val
        for d in range(len(grids) - 1, -1, -1):
            idx[d] += 1
            if idx[d] < len(grids[d]):
                break
            idx[d] = 0
        else:
            break
    grid_best = best_val

    for _ in range(REFINEMENT_ROUNDS):
        for d, param in enumerate(params):
            a = param.to_x(param.lo)
            b = param.to_x(param.hi)
            x, val = _golden_min(
                lambda t: objective(best_x[:d] + [t] + best_x[d + 1:]),
                a, b, tol=1e-4 * (param.to_x(param.hi) - param.to_x(param.lo)))
            if val < best_val:
                best_x[d], best_val = x, val

    if best_val > NO_IMPROVEMENT_FACTOR * grid_best:
        raise NoImprovement(
            f"refined residual {best_val:.3g} exceeds {NO_IMPROVEMENT_FACTOR}x "
            f"the best grid residual {grid_best:.3g}")

    values = {p.name: p.from_x(x) for p, x in zip(params, best_x)}
    residuals = tuple(anchor_residuals(scenario, anchors, values))
    return CalibrationResult(params=values, residual=sum(residuals),
                             residuals=residuals, anchors=tuple(anchors))


def _golden_min(f, a, b, tol):
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)
