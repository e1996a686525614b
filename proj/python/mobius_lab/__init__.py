"""Restricted Moebius series: sieve, prime sets, partial sums and analytic kernels."""

from fractions import Fraction

from ._core import (
    INFINITY_SENTINEL,
    Checkpoint,
    Error,
    FactorTable,
    PrimeSetSpec,
    adversarial,
    adversarial_set,
    analytic_report,
    build_segment,
    check_convolution,
    check_f_approx,
    converge,
    dickman_rho,
    epsilon_at,
    epsilon_star,
    exp_minus_zj,
    g_y_divisor,
    g_y_explicit,
    hankel_main_term,
    identity,
    is_prime,
    j_of,
    main_term,
    main_term_dz_at_1,
    mu_omega_divisor_sum,
    point_factor,
    primes_in,
    rho_hat,
    sum_mu_log,
    sum_restricted,
    sum_v1,
    sum_vp,
    sum_z_weighted,
)
from ._core import zeta_one_p as _zeta_one_p


def zeta_one_p(p: int) -> Fraction:
    """Exact value of prod_{q <= p} (1 - 1/q)^-1."""
    num, den = _zeta_one_p(p)
    return Fraction(num, den)


__all__ = [name for name in dir() if not name.startswith("_")]
