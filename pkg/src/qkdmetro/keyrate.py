"""Decoy-state BB84 performance engine.

Gain/QBER model and vacuum+weak decoy bounds with known background yield,
GLLP secret fraction, deadtime saturation and one-dimensional search for
the optimal signal intensity.
"""

import math
from dataclasses import dataclass

from .backend import kernels
from .errors import BoundCollapse, DegenerateChannel, DomainError, NoPositiveRate

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

MU_SCAN_LO = 0.05
MU_SCAN_HI = 1.5
MU_SCAN_POINTS = 21
MU_TOL = 1e-4


@dataclass(frozen=True)
class DecoyParams:
    mu: float = 0.79
    nu: float = None
    estimator_mode: str = "exact_y0"

    def __post_init__(self):
        if self.nu is None:
            object.__setattr__(self, "nu", self.mu / 20.0)
        if not 0 < self.nu < self.mu:
            raise ValueError("need 0 < nu < mu")
        if self.mu > 1.5:
            raise ValueError("mu must not exceed 1.5")
        if self.estimator_mode not in ("exact_y0", "one_decoy_bound"):
            raise ValueError(f"unknown estimator mode {self.estimator_mode!r}")


@dataclass(frozen=True)
class KeyRateParams:
    q: float = 0.5
    f: float = 1.05
    e0: float = 0.5

    def __post_init__(self):
        if not 0 < self.q <= 1:
            raise ValueError("sifting factor must be in (0, 1]")
        if self.f < 1:
            raise ValueError("error-correction efficiency must be >= 1")


@dataclass(frozen=True)
class YieldGain:
    q_mu: float
    e_mu: float
    y1_low: float
    e1_up: float
    q1_low: float


@dataclass(frozen=True)
class DistillationRates:
    raw_bps: float
    sifted_bps: float
    ec_corrected_bps: float
    secret_bps: float


def h2(x):
    """Shannon binary entropy in bits, with 0*log(0) := 0."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy needs x in [0, 1], got {x}")
    return kernels.binary_entropy(x)


def gain(y0, eta, mu):
    """Signal gain Q_mu = Y0 + 1 - exp(-eta*mu)."""
    return kernels.gain(y0, eta, mu)


def qber(y0, eta, mu, e_det, e0=0.5):
    """Signal QBER E_mu = (e0*Y0 + e_det*(1 - exp(-eta*mu))) / Q_mu."""
    if kernels.gain(y0, eta, mu) == 0.0:
        raise DegenerateChannel("gain is zero; QBER undefined")
    return kernels.qber(y0, eta, mu, e_det, e0)


def decoy_estimate(q_mu, e_mu, q_nu, e_nu, mu, nu, y0_known, e0=0.5):
    """Vacuum+weak decoy bounds on the single-photon contribution.

    y0_known is the background yield credited to the estimator: the true
    simulator Y0 in exact_y0 mode, 0 in the conservative one_decoy_bound
    mode (the caller chooses).
    """
    if not 0 < nu < mu:
        raise ValueError("need 0 < nu < mu")
    # Y0 enters the Y1 bound with a negative sign, so a *lower* Y0 bound is
    # unsafe there.  When Y0 is unknown (y0_known = 0) substitute the upper
    # bound e0*Y0 <= E_nu*Q_nu*e^nu implied by the decoy error rate.
    y0_for_y1 = y0_known if y0_known > 0.0 else e_nu * q_nu * math.exp(nu) / e0
    y1_low = kernels.decoy_y1_low(q_mu, q_nu, mu, nu, y0_for_y1)
    if y1_low == 0.0:
        raise BoundCollapse("no single-photon yield provable from these gains")
    e1_up = kernels.decoy_e1_up(q_nu, e_nu, nu, y0_known, e0, y1_low)
    q1_low = y1_low * mu * math.exp(-mu)
    return YieldGain(q_mu=q_mu, e_mu=e_mu, y1_low=y1_low, e1_up=e1_up, q1_low=q1_low)


def secret_fraction(params, yg):
    """GLLP secret fraction per pulse, clamped at zero."""
    return kernels.secret_fraction(
        params.q, params.f, yg.q_mu, yg.e_mu, yg.q1_low, yg.e1_up)


def qber_threshold(f, tol=1e-9):
    """QBER above which the secret fraction is zero even with Q1 = Q_mu.

    Root of f*h2(x) + h2(x) = 1 on (0, 0.5), located by bisection.
    """
    if f < 1:
        raise ValueError("error-correction efficiency must be >= 1")
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (f + 1.0) * kernels.binary_entropy(mid) < 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def apply_deadtime(rate_per_s, tau_dead_s):
    """Detection rate after deadtime saturation; asymptote 1/tau."""
    if rate_per_s < 0:
        raise ValueError("rate must be non-negative")
    return kernels.apply_deadtime(rate_per_s, tau_dead_s)


def distillation_rates(detector, params, yg):
    """Bits per second at each distillation stage.

    Deadtime acts on the detection rate before sifting; the secret rate
    inherits the same saturation factor.
    """
    ideal_clicks = detector.pulse_rate_hz * yg.q_mu
    raw = apply_deadtime(ideal_clicks, detector.deadtime_s)
    saturation = raw / ideal_clicks if ideal_clicks > 0 else 1.0
    sifted = params.q * raw
    ec = sifted * max(0.0, 1.0 - params.f * h2(yg.e_mu))
    secret = detector.pulse_rate_hz * secret_fraction(params, yg) * saturation
    return DistillationRates(
        raw_bps=raw,
        sifted_bps=sifted,
        ec_corrected_bps=ec,
        secret_bps=min(secret, ec),
    )


def optimize_mu(secret_rate_of_mu, lo=MU_SCAN_LO, hi=MU_SCAN_HI, tol=MU_TOL):
    """Signal intensity maximizing the secret rate.

    Coarse 21-point scan over [lo, hi] brackets the maximum, then
    golden-section search refines it to absolute tolerance tol.  The decoy
    intensity is the callable's business (the built-in scenarios keep the
    configured nu/mu ratio).
    """
    step = (hi - lo) / (MU_SCAN_POINTS - 1)
    grid = [lo + i * step for i in range(MU_SCAN_POINTS)]
    values = [secret_rate_of_mu(m) for m in grid]
    best = max(range(len(grid)), key=values.__getitem__)
    if values[best] <= 0.0:
        raise NoPositiveRate("secret rate non-positive over the whole scan range")
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, len(grid) - 1)]
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc = secret_rate_of_mu(c)
    fd = secret_rate_of_mu(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = secret_rate_of_mu(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = secret_rate_of_mu(d)
    return 0.5 * (a + b)
