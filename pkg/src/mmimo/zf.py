"""Zero-forcing SINR: per-realization assembly and the analytic CCDF.

The per-realization SINR is assembled term by term from the fading-averaged
component expectations (channel-estimation error, pilot contamination,
intra-cell and other-cell leakage, noise), all expressed through the
per-pilot link-budget aggregates. The analytic CCDF shares the integral
structure of the MRC evaluator with its own coefficient pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import (NumericsError, QuadratureSpec, alternating_binomial_sum,
                       eta, gamma_fn, integrate_semi_infinite)
from .propagation import LinkBudget
from .mrc import noise_constant

__all__ = [
    "ZfConstants",
    "zf_conditional_sinr",
    "zf_constants",
    "zf_ccdf",
]


def zf_conditional_sinr(lb: LinkBudget, M: int, K: int, epsilon: float,
                        sigma2: float = 0.0, P_t: float = 0.2,
                        exact_conditional: bool = True,
                        dof_rng: np.random.Generator | None = None) -> float:
    """Fading-averaged ZF SINR of the typical user for one realization.

    exact_conditional keeps the (1 - w/S) conditional factors in the
    leakage terms; with False they are upper-bounded by 1. dof_rng, if
    given, replaces the deterministic projection degrees of freedom in the
    signal term with a chi-square draw (sensitivity mode).
    """
    if M - K + 1 < 1:
        raise NumericsError(f"ZF requires M - K + 1 >= 1, got M={M}, K={K}")
    if lb.K != K:
        raise NumericsError(f"link budget carries {lb.K} pilots, expected {K}")
    dof = M - K + 1.0
    b = lb.beta00 ** (1.0 - epsilon)
    S1 = lb.S[0]
    d1p = lb.delta1 - lb.noise_over_kpt  # interference-only part of delta1

    numer = b[0] ** 2 / S1 ** 2
    if dof_rng is not None:
        numer *= dof / (0.5 * dof_rng.chisquare(2 * int(dof)))

    e_est = lb.delta1[0] * b[0] / (dof * S1 ** 2)
    i_pilot = ((M * M + M) * lb.delta2[0] + M * (S1 * d1p[0] - lb.delta2[0])) \
        / ((M * M + M) * S1 ** 2)
    if exact_conditional:
        intra = b[1:] * (1.0 - b[1:] / lb.S[1:])
        other = d1p[1:] - lb.delta2[1:] / lb.S[1:]
    else:
        intra = b[1:]
        other = d1p[1:]
    i_intra = M * intra.sum() / (dof ** 2 * S1)
    i_other = M * other.sum() / (dof ** 2 * S1)
    noise = sigma2 / (P_t * dof * S1)

    denom = e_est + i_pilot + i_intra + i_other + noise
    if denom == 0.0:
        return math.inf
    return numer / denom


@dataclass(frozen=True)
class ZfConstants:
    """Precomputed coefficients of the analytic ZF CCDF."""

    M: int
    K: int
    alpha: float
    epsilon: float
    C_sigma2: float
    C6: float
    C7: float
    C8: float
    C9: float


def zf_constants(M: int, K: int, alpha: float, epsilon: float,
                 sigma2: float = 0.0, P_t: float = 0.2,
                 C: float = 1.0, lambda_b: float = 1.0) -> ZfConstants:
    """Coefficients of the analytic ZF CCDF for one parameter set."""
    if alpha <= 2:
        raise NumericsError("alpha must exceed 2")
    if M - K + 1 < 1:
        raise NumericsError(f"ZF requires M - K + 1 >= 1, got M={M}, K={K}")
    cs2 = noise_constant(K, alpha, epsilon, sigma2, P_t, C, lambda_b)
    g_half = gamma_fn(epsilon / 2.0 + 1.0) ** alpha
    g_one = gamma_fn(epsilon + 1.0) ** alpha
    dof = M - K + 1.0
    c9 = 2.0 * g_half / (alpha - 2.0) + cs2
    c8 = (2.0 * g_half + (alpha - 2.0) * cs2) \
        / ((alpha - 2.0) * (1.0 + cs2) + 2.0 * g_half)
    cross = M * (K - 1.0) / dof ** 2
    c6 = c9 * (1.0 / dof + 1.0 / (M + 1.0) + cross) + cross * c8
    c7 = (M / (M + 1.0)) * g_one / (alpha - 1.0) \
        + (1.0 / (M + 1.0) + cross) * c9 * c9 + cross * c8 * c9
    return ZfConstants(M, K, alpha, epsilon, cs2, c6, c7, c8, c9)


def zf_ccdf(T: float, consts: ZfConstants, N: int = 5,
            quad: QuadratureSpec = QuadratureSpec()) -> float:
    """Analytic coverage probability P(SINR > T) under ZF."""
    if T <= 0:
        raise NumericsError("T must be positive")
    e1 = consts.alpha * (1.0 - consts.epsilon)
    e2 = e1 / 2.0
    et = eta(N)

    def term(n):
        s = n * et * T

        def integrand(t):
            if t <= 0:
                return 0.0
            return math.exp(-s * (consts.C6 * t ** e2 + consts.C7 * t ** e1) - t)

        return integrate_semi_infinite(integrand, quad)

    p = alternating_binomial_sum(N, term)
    assert -1e-6 <= p <= 1.0 + 1e-6, f"coverage probability out of range: {p}"
    return min(max(p, 0.0), 1.0)
