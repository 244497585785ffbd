"""Path loss, fractional power control, noise and interference aggregates.

The per-realization quantities computed here (serving-link gain beta00 and
the per-pilot sums delta1, delta2, S) are the only inputs the receiver
SINR formulas need; individual channel vectors are never materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import NetworkRealization, sample_ppp

__all__ = [
    "PathLossModel",
    "PowerControl",
    "NoiseModel",
    "LinkBudget",
    "PropagationError",
    "default_reference_gain",
    "path_loss",
    "tx_power",
    "link_budget",
    "sample_exclusion_ball_interferers",
]

SPEED_OF_LIGHT = 299_792_458.0


class PropagationError(ValueError):
    pass


def default_reference_gain(carrier_hz: float = 2.0e9,
                           antenna_gain_db: float = 8.0) -> float:
    """Reference link gain at 1 m: free-space (c / (4*pi*f_c))^2 plus the
    combined transmit/receive antenna gain (default 8 dB, a typical sector
    antenna with a 0 dBi handset)."""
    return ((SPEED_OF_LIGHT / (4.0 * math.pi * carrier_hz)) ** 2
            * 10.0 ** (antenna_gain_db / 10.0))


@dataclass(frozen=True)
class PathLossModel:
    """Power-law path loss: gain = C * d^(-alpha)."""

    C: float = default_reference_gain()
    alpha: float = 4.0
    min_distance: float = 1.0

    def __post_init__(self):
        if self.C <= 0:
            raise PropagationError("C must be positive")
        if self.alpha <= 2:
            raise PropagationError("alpha must exceed 2")
        if self.min_distance <= 0:
            raise PropagationError("min_distance must be positive")


@dataclass(frozen=True)
class PowerControl:
    """Fractional power control: tx power = P_t * beta^(-epsilon)."""

    epsilon: float = 0.0
    P_t: float = 0.2  # 23 dBm

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise PropagationError("epsilon must lie in [0, 1]")
        if self.P_t <= 0:
            raise PropagationError("P_t must be positive")


@dataclass(frozen=True)
class NoiseModel:
    """Receiver noise power in watts."""

    sigma2: float = 0.0

    def __post_init__(self):
        if self.sigma2 < 0:
            raise PropagationError("sigma2 must be >= 0")

    @classmethod
    def thermal(cls, bandwidth_hz: float = 20e6, noise_figure_db: float = 0.0):
        """Thermal noise: -174 dBm/Hz + 10*log10(BW) + NF."""
        if bandwidth_hz <= 0:
            raise PropagationError("bandwidth_hz must be positive")
        dbm = -174.0 + 10.0 * math.log10(bandwidth_hz) + noise_figure_db
        return cls(sigma2=10.0 ** ((dbm - 30.0) / 10.0))

    @classmethod
    def off(cls):
        return cls(sigma2=0.0)


@dataclass
class LinkBudget:
    """Per-pilot interference aggregates of one realization.

    Arrays are indexed by pilot (0-based; pilot index 0 is the typical
    user's pilot). With w_l = (beta_ll)^(-eps) * beta_0l summed over
    other-cell users of the pilot:
      delta1[k] = sum_l w_l + sigma2 / (K * P_t)
      delta2[k] = sum_l w_l^2
      S[k]      = beta00[k]^(1-eps) + delta1[k]
    """

    beta00: np.ndarray
    delta1: np.ndarray
    delta2: np.ndarray
    S: np.ndarray
    epsilon: float
    noise_over_kpt: float

    @property
    def K(self) -> int:
        return self.beta00.shape[0]


def path_loss(distance, model: PathLossModel):
    """Power-law gain with the minimum-distance clamp applied."""
    d = np.maximum(np.asarray(distance, float), model.min_distance)
    return model.C * d ** (-model.alpha)


def tx_power(beta_serving, pc: PowerControl):
    """Uplink transmit power under fractional path-loss inversion."""
    beta_serving = np.asarray(beta_serving, float)
    if np.any(beta_serving <= 0):
        raise PropagationError("beta_serving must be positive")
    return pc.P_t * beta_serving ** (-pc.epsilon)


def link_budget(real: NetworkRealization, model: PathLossModel,
                pc: PowerControl, noise: NoiseModel, K: int | None = None) -> LinkBudget:
    """Aggregate the realized path losses into the per-pilot sums.

    For each pilot, beta00 is the tagged cell's own user's serving gain;
    the delta sums run over every other cell's user of that pilot.
    """
    if K is None:
        K = real.K
    if K != real.K:
        raise PropagationError(f"realization carries {real.K} pilots, expected {K}")
    t = real.tagged_bs
    bs0 = real.bs_xy[t]
    eps = pc.epsilon

    beta00 = path_loss(real.serving_dist[t], model)  # (K,)
    noise_over_kpt = noise.sigma2 / (K * pc.P_t)

    mask = np.ones(real.n_cells, bool)
    mask[t] = False
    others_xy = real.user_xy[mask]            # (n-1, K, 2)
    serving_other = real.serving_dist[mask]   # (n-1, K)
    if others_xy.shape[0] > 0:
        d_to_tagged = np.linalg.norm(others_xy - bs0, axis=-1)
        beta_0l = path_loss(d_to_tagged, model)
        beta_ll = path_loss(serving_other, model)
        w = beta_ll ** (-eps) * beta_0l
        delta1 = w.sum(axis=0) + noise_over_kpt
        delta2 = (w * w).sum(axis=0)
    else:
        delta1 = np.full(K, noise_over_kpt)
        delta2 = np.zeros(K)
    S = beta00 ** (1.0 - eps) + delta1
    return LinkBudget(beta00, delta1, delta2, S, eps, noise_over_kpt)


def sample_exclusion_ball_interferers(lambda_b: float, region_radius: float,
                                      rng: np.random.Generator) -> np.ndarray:
    """Homogeneous PPP on the annulus between the exclusion radius and the region edge.

    The exclusion radius R_e satisfies lambda_b * pi * R_e^2 = 1, so the
    removed disc holds one point on average. Used to validate the analytic
    formulas against their own modelling assumptions.
    """
    if lambda_b <= 0:
        raise PropagationError("lambda_b must be positive")
    r_e = math.sqrt(1.0 / (math.pi * lambda_b))
    if region_radius <= r_e:
        raise PropagationError("region_radius must exceed the exclusion radius")
    n = rng.poisson(lambda_b * math.pi * (region_radius ** 2 - r_e ** 2))
    r = np.sqrt(r_e ** 2 + (region_radius ** 2 - r_e ** 2) * rng.random(n))
    th = 2.0 * math.pi * rng.random(n)
    return np.column_stack([r * np.cos(th), r * np.sin(th)])
