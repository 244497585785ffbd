"""Antenna/user scaling rules and rate/throughput metrics.

Connects the coverage evaluators to system design questions: how many
antennas preserve the SIR distribution when the user load changes, how
many antennas a ZF receiver needs to match an MRC deployment, and the
spectral efficiency / cell throughput implied by a coverage curve.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

__all__ = [
    "ScalingSpec",
    "RateParams",
    "RateResult",
    "PlanningError",
    "mrc_scaling_exponent",
    "scale_antennas",
    "zf_match_mrc",
    "spectral_efficiency",
    "overhead_and_throughput",
]


class PlanningError(ValueError):
    pass


@dataclass(frozen=True)
class ScalingSpec:
    """Scaling exponent s for MRC and ZF/MRC antenna ratio xi."""

    s: float
    xi: float

    def __post_init__(self):
        if self.s < 1.0 or not 0.0 < self.xi <= 1.0:
            raise PlanningError("require s >= 1 and 0 < xi <= 1")


@dataclass(frozen=True)
class RateParams:
    """Rate-evaluation settings: SINR cap and coherence budget."""

    T_max: float          # linear SINR cap
    T_c: int              # coherence time, symbols
    T_t: int              # training length, symbols (= K)

    def __post_init__(self):
        if self.T_max <= 0:
            raise PlanningError("T_max must be positive")
        if not 0 < self.T_t < self.T_c:
            raise PlanningError("need 0 < T_t < T_c")

    @property
    def psi(self) -> float:
        return self.T_t / self.T_c


@dataclass(frozen=True)
class RateResult:
    """Per-user and cell rates in bps/Hz."""

    tau0: float
    tau0_bar: float
    tau_cell: float
    psi: float


def mrc_scaling_exponent(alpha: float, epsilon: float) -> float:
    """Exponent s with (M+1) ~ K^s preserving the MRC SIR distribution."""
    if alpha <= 2:
        raise PlanningError("alpha must exceed 2")
    if not 0.0 <= epsilon <= 1.0:
        raise PlanningError("epsilon must lie in [0, 1]")
    return (alpha / 2.0) * (1.0 - epsilon) + epsilon


def scale_antennas(M: int, K: int, K_new: int, s: float) -> int:
    """Antenna count keeping the SIR distribution as K changes to K_new."""
    if K < 1 or K_new < 1:
        raise PlanningError("K and K_new must be >= 1")
    return round((M + 1) * (K_new / K) ** s - 1)


def zf_match_mrc(M_mrc: int, K: int, alpha: float, epsilon: float) -> int:
    """ZF antenna count matching an MRC deployment's SIR distribution.

    Uses the ratio xi = K^(-(alpha/2 - 1)(1 - epsilon)); warns when the
    result falls below the M/K >= 3 regime where the match is reliable.
    """
    if K < 1:
        raise PlanningError("K must be >= 1")
    if alpha < 2:
        raise PlanningError("alpha must be >= 2")
    xi = K ** (-(alpha / 2.0 - 1.0) * (1.0 - epsilon))
    m_zf = round(xi * (M_mrc + 1) - 1)
    if m_zf < 3 * K:
        warnings.warn(f"M_zf={m_zf} is below 3*K={3 * K}; the ZF/MRC match "
                      "degrades in this regime", stacklevel=2)
    return m_zf


def _curve_evaluator(curve) -> Callable[[float], float]:
    """Interpolating P(x) from a threshold-grid curve (linear in dB)."""
    th_db = np.asarray(curve.thresholds_db, float)
    pr = np.asarray(curve.probabilities, float)

    def p_of(x: float) -> float:
        if x <= 0:
            return float(pr[0])
        x_db = 10.0 * math.log10(x)
        if x_db <= th_db[0]:
            return float(pr[0])
        if x_db > th_db[-1]:
            raise PlanningError(
                f"coverage curve ends at {th_db[-1]} dB, below the requested "
                f"{x_db:.2f} dB; extend the threshold grid")
        return float(np.interp(x_db, th_db, pr))

    return p_of


def spectral_efficiency(ccdf, T_max: float) -> float:
    """Average spectral efficiency tau0 = (1/ln2) * int_0^Tmax P(x)/(1+x) dx.

    ccdf is either a callable P(linear threshold) or a curve object with
    thresholds_db/probabilities fields; T_max is the linear SINR cap.
    """
    if T_max <= 0:
        raise PlanningError("T_max must be positive")
    p = ccdf if callable(ccdf) else _curve_evaluator(ccdf)
    # probe once so grid-coverage errors surface before quadrature
    p(T_max)
    with warnings.catch_warnings():
        # interpolated curves have slope kinks at grid points; the adaptive
        # rule resolves them but warns about roundoff on the way
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(lambda x: p(x) / (1.0 + x), 0.0, T_max,
                                limit=500, epsabs=1e-8, epsrel=1e-6)
    return val / math.log(2.0)


def overhead_and_throughput(K: int, T_c: int, tau0: float) -> RateResult:
    """Apply training overhead psi = K/T_c and aggregate over the K users."""
    if K < 1:
        raise PlanningError("K must be >= 1")
    if K >= T_c:
        raise PlanningError(f"training K={K} does not fit in T_c={T_c} symbols")
    if tau0 < 0:
        raise PlanningError("tau0 must be >= 0")
    psi = K / T_c
    tau0_bar = (1.0 - psi) * tau0
    return RateResult(tau0=tau0, tau0_bar=tau0_bar,
                      tau_cell=K * tau0_bar, psi=psi)
