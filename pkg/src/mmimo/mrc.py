"""Maximum-ratio-combining SINR: per-realization formula and analytic CCDFs.

The per-realization value is the fading-averaged conditional SINR of the
typical user given the realized path losses. The analytic side provides
the general CCDF (any power-control fraction, with noise), plus the two
closed special cases: full path-loss inversion (epsilon=1) and no power
control (epsilon=0), both interference-limited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import (NumericsError, QuadratureSpec, alternating_binomial_sum,
                       eta, gamma_fn, integrate_semi_infinite)
from .propagation import LinkBudget

__all__ = [
    "MrcConstants",
    "mrc_conditional_sinr",
    "mrc_constants",
    "mrc_ccdf",
    "mrc_ccdf_full_pc",
    "mrc_ccdf_no_pc",
]


def mrc_conditional_sinr(lb: LinkBudget, M: int, K: int, epsilon: float) -> float:
    """Fading-averaged MRC SINR of the typical user for one realization.

    Returns +inf when the denominator vanishes (isolated cell, no noise).
    """
    if M < 1 or K < 1:
        raise NumericsError("M and K must be >= 1")
    if lb.K != K:
        raise NumericsError(f"link budget carries {lb.K} pilots, expected {K}")
    b = lb.beta00 ** (1.0 - epsilon)
    numer = (M + 1) * b[0] ** 2
    denom = (M * lb.delta2[0]
             + b[0] * lb.delta1[0]
             + (b[1:].sum() + lb.delta1.sum()) * (b[0] + lb.delta1[0]))
    if denom == 0.0:
        return math.inf
    return numer / denom


@dataclass(frozen=True)
class MrcConstants:
    """Precomputed coefficients of the analytic MRC CCDF."""

    M: int
    K: int
    alpha: float
    epsilon: float
    C_sigma2: float
    c9: float
    C1: float
    C2: float
    C5: float
    mu: float
    N: int
    eta: float


def noise_constant(K: int, alpha: float, epsilon: float, sigma2: float,
                   P_t: float, C: float, lambda_b: float) -> float:
    """Dimensionless noise term sigma2 / (K * P_t * C^(1-eps) * (lambda_b*pi)^(alpha(1-eps)/2))."""
    if sigma2 == 0.0:
        return 0.0
    return sigma2 / (K * P_t * C ** (1.0 - epsilon)
                     * (lambda_b * math.pi) ** (alpha * (1.0 - epsilon) / 2.0))


def mrc_constants(M: int, K: int, alpha: float, epsilon: float,
                  sigma2: float = 0.0, P_t: float = 0.2,
                  C: float = 1.0, lambda_b: float = 1.0, N: int = 5) -> MrcConstants:
    """Coefficients of the analytic MRC CCDF for one parameter set."""
    if alpha <= 2:
        raise NumericsError("alpha must exceed 2")
    if N < 1:
        raise NumericsError("N must be >= 1")
    if M < 1 or K < 1:
        raise NumericsError("M and K must be >= 1")
    cs2 = noise_constant(K, alpha, epsilon, sigma2, P_t, C, lambda_b)
    g_half = gamma_fn(epsilon / 2.0 + 1.0) ** alpha
    g_one = gamma_fn(epsilon + 1.0) ** alpha
    c9 = 2.0 * g_half / (alpha - 2.0) + cs2
    C1 = (K + 1.0) * c9 / (M + 1.0)
    C2 = M * g_one / ((M + 1.0) * (alpha - 1.0)) + K * c9 * c9 / (M + 1.0)
    g15 = gamma_fn(1.5) ** alpha
    C5 = (4.0 * gamma_fn(1.5) ** (2.0 * alpha)
          + (alpha * alpha - 4.0) * g15) / (alpha - 2.0) ** 2
    mu = K / (M + 1.0) ** (2.0 / alpha)
    return MrcConstants(M, K, alpha, epsilon, cs2, c9, C1, C2, C5, mu, N, eta(N))


def _pilot_factor_exact(c: float, p: float, K: int,
                        quad: QuadratureSpec) -> float:
    """Exact inner factor: (integral of exp(-u - c*u^(-p)) du)^(K-1)."""
    if K == 1 or c == 0.0:
        return 1.0
    if p == 0.0:
        return math.exp(-c * (K - 1))
    inner = integrate_semi_infinite(lambda u: math.exp(-u - c * u ** (-p))
                                    if u > 0 else 0.0, quad)
    return inner ** (K - 1)


def _pilot_factor_fast(c: float, p: float, K: int,
                       quad: QuadratureSpec) -> float:
    """Fast inner factor: (integral of exp(-u)/(1 + c*u^(-p)) du)^(K-1)."""
    if K == 1 or c == 0.0:
        return 1.0
    if p == 0.0:
        return (1.0 / (1.0 + c)) ** (K - 1)
    inner = integrate_semi_infinite(lambda u: math.exp(-u) / (1.0 + c * u ** (-p))
                                    if u > 0 else 0.0, quad)
    return inner ** (K - 1)


def mrc_ccdf(T: float, consts: MrcConstants, quad: QuadratureSpec = QuadratureSpec(),
             fast_pilot_factor: bool = False) -> float:
    """Analytic coverage probability P(SINR > T) under MRC.

    T is a linear SINR threshold. The other-pilot factor uses its exact
    inner-integral form by default; fast_pilot_factor switches to the
    rational approximation.
    """
    if T <= 0:
        raise NumericsError("T must be positive")
    a = consts.alpha
    e1 = consts.alpha * (1.0 - consts.epsilon)          # full-power exponent
    e2 = e1 / 2.0                                       # half-power exponent
    M1 = consts.M + 1.0
    factor = _pilot_factor_fast if fast_pilot_factor else _pilot_factor_exact
    # the inner factor feeds the outer integrand, so its quadrature noise
    # must sit well below the outer tolerance or the outer error estimate
    # gets floored by it: request two orders tighter, but accept whatever
    # lands within the outer tolerance (the request is not always reachable
    # at extreme thresholds)
    inner_quad = QuadratureSpec(abs_tol=0.01 * quad.abs_tol,
                                rel_tol=0.01 * quad.rel_tol,
                                max_subdivisions=quad.max_subdivisions,
                                accept_tol=quad.abs_tol)

    def term(n):
        s = n * T * consts.eta

        def integrand(t):
            if t <= 0:
                return 0.0
            t1 = t ** e1
            t2 = t ** e2
            c4 = (consts.c9 * t1 + t2) / M1
            return (math.exp(-t - s * (consts.C1 * t1 + consts.C2 * t2))
                    * factor(s * c4, e2, consts.K, inner_quad))

        return integrate_semi_infinite(integrand, quad)

    p = alternating_binomial_sum(consts.N, term)
    assert -1e-6 <= p <= 1.0 + 1e-6, f"coverage probability out of range: {p}"
    return min(max(p, 0.0), 1.0)


def mrc_ccdf_full_pc(T: float, M: int, K: int, alpha: float, N: int = 5) -> float:
    """Closed-form interference-limited coverage with full path-loss inversion."""
    if T <= 0:
        raise NumericsError("T must be positive")
    c = mrc_constants(M, K, alpha, 1.0, N=N)
    g15 = gamma_fn(1.5) ** alpha
    coeff = (c.C5 * K + g15) / (M + 1.0) + 1.0 / (alpha - 1.0)
    p = alternating_binomial_sum(N, lambda n: math.exp(-T * c.eta * n * coeff))
    assert -1e-6 <= p <= 1.0 + 1e-6, f"coverage probability out of range: {p}"
    return min(max(p, 0.0), 1.0)


def mrc_ccdf_no_pc(T: float, M: int, K: int, alpha: float, N: int = 5,
                   quad: QuadratureSpec = QuadratureSpec()) -> float:
    """Interference-limited coverage without power control (single integral)."""
    if T <= 0:
        raise NumericsError("T must be positive")
    if alpha <= 2:
        raise NumericsError("alpha must exceed 2")
    mu = K / (M + 1.0) ** (2.0 / alpha)
    et = eta(N)
    g = gamma_fn(1.0 - 2.0 / alpha)

    def term(n):
        s = n * et * T
        lin = mu * g * s ** (2.0 / alpha) + 1.0

        def integrand(t):
            return math.exp(-lin * t - s * t ** alpha / (alpha - 1.0))

        return integrate_semi_infinite(integrand, quad)

    p = alternating_binomial_sum(N, term)
    assert -1e-6 <= p <= 1.0 + 1e-6, f"coverage probability out of range: {p}"
    return min(max(p, 0.0), 1.0)
