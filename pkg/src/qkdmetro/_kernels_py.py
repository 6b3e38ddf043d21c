"""Pure-Python twins of the compiled scalar kernels.

These are the hot functions evaluated thousands of times per calibration
run.  Signatures and semantics must stay bit-identical to ``_kernels.pyx``;
argument validation lives in the public wrappers, not here.
"""

import math

LN10 = math.log(10.0)

BACKEND = "python"


def binary_entropy(x):
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def gain(y0, eta, mu):
    return y0 - math.expm1(-eta * mu)


def qber(y0, eta, mu, e_det, e0):
    q_mu = y0 - math.expm1(-eta * mu)
    return (e0 * y0 + e_det * -math.expm1(-eta * mu)) / q_mu


def decoy_y1_low(q_mu, q_nu, mu, nu, y0):
    denom = mu * nu - nu * nu
    val = (mu / denom) * (
        q_nu * math.exp(nu)
        - q_mu * math.exp(mu) * nu * nu / (mu * mu)
        - (mu * mu - nu * nu) / (mu * mu) * y0
    )
    if val < 0.0:
        return 0.0
    if val > 1.0:
        return 1.0
    return val


def decoy_e1_up(q_nu, e_nu, nu, y0, e0, y1_low):
    val = (e_nu * q_nu * math.exp(nu) - e0 * y0) / (y1_low * nu)
    if val < 0.0:
        return 0.0
    if val > 0.5:
        return 0.5
    return val


def raman_forward(p_launch_w, rho, dlambda_nm, length_km, alpha_db_per_km):
    alpha = alpha_db_per_km * LN10 / 10.0
    return p_launch_w * rho * dlambda_nm * length_km * math.exp(-alpha * length_km)


def raman_backward(p_launch_w, rho, dlambda_nm, length_km, alpha_db_per_km):
    alpha = alpha_db_per_km * LN10 / 10.0
    if alpha == 0.0:
        return p_launch_w * rho * dlambda_nm * length_km
    return p_launch_w * rho * dlambda_nm * -math.expm1(-2.0 * alpha * length_km) / (2.0 * alpha)


def apply_deadtime(rate_per_s, tau_dead_s):
    return rate_per_s / (1.0 + rate_per_s * tau_dead_s)


def secret_fraction(q, f, q_mu, e_mu, q1_low, e1_up):
    r = q * (-q_mu * f * binary_entropy(e_mu) + q1_low * (1.0 - binary_entropy(e1_up)))
    return r if r > 0.0 else 0.0
