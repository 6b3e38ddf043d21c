"""Optical noise reaching the quantum detector and the background yield Y0.

Two noise routes matter in CWDM/GPON coexistence: spontaneous Raman
scattering of the classical launch power inside the fiber spans, and
residual crosstalk of the classical carriers through the receiver's
demux/filter chain.  Both are converted to a per-gate detection
probability and added to the detector dark counts.
"""

from dataclasses import dataclass

from .backend import kernels
from .channel_plan import quantum_channel
from .optical_path import Fiber, element_loss, element_rejection_db, transmittance

PLANCK_J_S = 6.62607015e-34
LIGHT_SPEED_M_S = 2.99792458e8

# Crosstalk is treated as a broadband floor inside the acceptance band, so
# it scales with the filter width relative to this reference.
REFERENCE_FILTER_WIDTH_NM = 0.8


@dataclass(frozen=True)
class DetectorModel:
    efficiency: float = 0.10
    gate_width_s: float = 1.0e-9
    dark_count_prob: float = 2.0e-5
    deadtime_s: float = 1.0e-5
    misalignment_error: float = 0.001
    pulse_rate_hz: float = 1.0e6

    def __post_init__(self):
        if not 0 < self.efficiency <= 1:
            raise ValueError("detector efficiency must be in (0, 1]")
        if not 0 <= self.misalignment_error < 0.5:
            raise ValueError("misalignment error must be in [0, 0.5)")
        if self.gate_width_s < 0 or self.deadtime_s < 0:
            raise ValueError("gate width and deadtime must be non-negative")


@dataclass(frozen=True)
class NoiseBudget:
    forward_raman_w: float
    backward_raman_w: float
    crosstalk_w: float
    dark_yield: float
    total_y0: float


def raman_forward(p_launch_w, rho, dlambda_nm, length_km, alpha_db_per_km):
    """Co-propagating Raman noise power at the fiber output, in W."""
    _check_raman_args(p_launch_w, rho, dlambda_nm, length_km, alpha_db_per_km)
    return kernels.raman_forward(p_launch_w, rho, dlambda_nm, length_km, alpha_db_per_km)


def raman_backward(p_launch_w, rho, dlambda_nm, length_km, alpha_db_per_km):
    """Counter-propagating Raman noise power at the pump entry end, in W."""
    _check_raman_args(p_launch_w, rho, dlambda_nm, length_km, alpha_db_per_km)
    return kernels.raman_backward(p_launch_w, rho, dlambda_nm, length_km, alpha_db_per_km)


def _check_raman_args(p, rho, dlam, length, alpha):
    if min(p, rho, dlam, length, alpha) < 0:
        raise ValueError("raman arguments must be non-negative")


def crosstalk_leak(p_launch_w, isolation_db):
    """Classical power leaking through a component with the given isolation."""
    if p_launch_w < 0 or isolation_db < 0:
        raise ValueError("power and isolation must be non-negative")
    return p_launch_w * 10.0 ** (-isolation_db / 10.0)


def power_to_photon_rate(p_w, wavelength_nm):
    """Photon flux of an optical power at the given wavelength, in 1/s."""
    if p_w < 0 or wavelength_nm <= 0:
        raise ValueError("need non-negative power and positive wavelength")
    return p_w * wavelength_nm * 1e-9 / (PLANCK_J_S * LIGHT_SPEED_M_S)


def background_yield(path, plan, detector, filter_width_nm, duty_cycle=1.0):
    """Per-gate background yield Y0 at the quantum receiver.

    The quantum receiver sits at the end of the path.  For every classical
    launch, Raman noise is generated per fiber span (direction dependent)
    and attenuated by all in-band elements between the span and the
    receiver; crosstalk leaks through the terminal demux/filter chain.
    """
    q_nm = quantum_channel(plan).center_nm
    elements = path.elements
    fiber_idx = [i for i, e in enumerate(elements) if isinstance(e, Fiber)]
    terminal_start = (fiber_idx[-1] + 1) if fiber_idx else 0
    width_factor = filter_width_nm / REFERENCE_FILTER_WIDTH_NM

    # In-band transmittance from just after element i to the detector.
    down_t = [1.0] * (len(elements) + 1)
    for i in range(len(elements) - 1, -1, -1):
        down_t[i] = down_t[i + 1] * transmittance(element_loss(elements[i], q_nm))

    forward_w = 0.0
    backward_w = 0.0
    crosstalk_w = 0.0
    for lp in path.launches:
        pump_w = lp.launch_watts() * duty_cycle
        if pump_w == 0.0:
            continue
        c_nm = lp.wavelength_nm
        if lp.direction == "co":
            for i in range(lp.position, terminal_start):
                e = elements[i]
                if isinstance(e, Fiber):
                    span = e.span
                    forward_w += down_t[i + 1] * kernels.raman_forward(
                        pump_w, span.raman_coeff, filter_width_nm,
                        span.length_km, span.alpha_db_per_km(q_nm))
                    pump_w *= transmittance(span.length_km * span.alpha_db_per_km(c_nm))
                else:
                    pump_w *= transmittance(element_loss(e, c_nm))
            iso_db = sum(element_rejection_db(e, c_nm) for e in elements[terminal_start:])
            crosstalk_w += pump_w * 10.0 ** (-iso_db / 10.0) * width_factor
        elif lp.direction == "counter":
            # Adjacent transmitter at the receiver side couples directly
            # into the terminal chain.
            iso_db = sum(element_rejection_db(e, c_nm) for e in elements[terminal_start:])
            crosstalk_w += pump_w * 10.0 ** (-iso_db / 10.0) * width_factor
            for i in range(min(lp.position, terminal_start) - 1, -1, -1):
                e = elements[i]
                if isinstance(e, Fiber):
                    span = e.span
                    backward_w += down_t[i + 1] * kernels.raman_backward(
                        pump_w, span.raman_coeff, filter_width_nm,
                        span.length_km, span.alpha_db_per_km(q_nm))
                    pump_w *= transmittance(span.length_km * span.alpha_db_per_km(c_nm))
                else:
                    pump_w *= transmittance(element_loss(e, c_nm))
        else:
            raise ValueError(f"unknown launch direction {lp.direction!r}")

    total_w = forward_w + backward_w + crosstalk_w
    photon_yield = (power_to_photon_rate(total_w, q_nm)
                    * detector.gate_width_s * detector.efficiency)
    return NoiseBudget(
        forward_raman_w=forward_w,
        backward_raman_w=backward_w,
        crosstalk_w=crosstalk_w,
        dark_yield=detector.dark_count_prob,
        total_y0=detector.dark_count_prob + photon_yield,
    )
