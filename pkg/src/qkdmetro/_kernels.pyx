# cython: language_level=3, boundscheck=False, cdivision=True
"""Compiled scalar kernels; must match ``_kernels_py`` exactly."""

from libc.math cimport exp, expm1, log, log2

cdef double LN10 = log(10.0)

BACKEND = "cython"


cpdef double binary_entropy(double x):
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * log2(x) - (1.0 - x) * log2(1.0 - x)


cpdef double gain(double y0, double eta, double mu):
    return y0 - expm1(-eta * mu)


cpdef double qber(double y0, double eta, double mu, double e_det, double e0):
    cdef double q_mu = y0 - expm1(-eta * mu)
    return (e0 * y0 + e_det * -expm1(-eta * mu)) / q_mu


cpdef double decoy_y1_low(double q_mu, double q_nu, double mu, double nu, double y0):
    cdef double denom = mu * nu - nu * nu
    cdef double val = (mu / denom) * (
        q_nu * exp(nu)
        - q_mu * exp(mu) * nu * nu / (mu * mu)
        - (mu * mu - nu * nu) / (mu * mu) * y0
    )
    if val < 0.0:
        return 0.0
    if val > 1.0:
        return 1.0
    return val


cpdef double decoy_e1_up(double q_nu, double e_nu, double nu, double y0,
                         double e0, double y1_low):
    cdef double val = (e_nu * q_nu * exp(nu) - e0 * y0) / (y1_low * nu)
    if val < 0.0:
        return 0.0
    if val > 0.5:
        return 0.5
    return val


cpdef double raman_forward(double p_launch_w, double rho, double dlambda_nm,
                           double length_km, double alpha_db_per_km):
    cdef double alpha = alpha_db_per_km * LN10 / 10.0
    return p_launch_w * rho * dlambda_nm * length_km * exp(-alpha * length_km)


cpdef double raman_backward(double p_launch_w, double rho, double dlambda_nm,
                            double length_km, double alpha_db_per_km):
    cdef double alpha = alpha_db_per_km * LN10 / 10.0
    if alpha == 0.0:
        return p_launch_w * rho * dlambda_nm * length_km
    return p_launch_w * rho * dlambda_nm * -expm1(-2.0 * alpha * length_km) / (2.0 * alpha)


cpdef double apply_deadtime(double rate_per_s, double tau_dead_s):
    return rate_per_s / (1.0 + rate_per_s * tau_dead_s)


cpdef double secret_fraction(double q, double f, double q_mu, double e_mu,
                             double q1_low, double e1_up):
    cdef double r = q * (-q_mu * f * binary_entropy(e_mu)
                         + q1_low * (1.0 - binary_entropy(e1_up)))
    return r if r > 0.0 else 0.0
