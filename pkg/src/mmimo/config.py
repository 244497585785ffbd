"""Run configuration: validation, JSON ingestion and unit conversion.

All boundary quantities are accepted in engineering units (dBm, dB, ISD in
meters) and converted once to the linear/SI values the library consumes.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import isd_to_density
from .propagation import NoiseModel, default_reference_gain

__all__ = ["ConfigError", "ThresholdGrid", "RunConfig", "parse_config"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ThresholdGrid:
    """Ascending SINR threshold grid in dB."""

    min_db: float = -10.0
    max_db: float = 30.0
    step_db: float = 0.5

    def __post_init__(self):
        if self.step_db <= 0 or self.max_db <= self.min_db:
            raise ConfigError("threshold grid needs max > min and step > 0")

    def values(self) -> np.ndarray:
        n = int(round((self.max_db - self.min_db) / self.step_db)) + 1
        return self.min_db + self.step_db * np.arange(n)


@dataclass(frozen=True)
class RunConfig:
    """All scalar parameters of one experiment."""

    M: int = 64
    K: int = 10
    alpha: float = 4.0
    epsilon: float = 0.0
    lambda_b: float = isd_to_density(500.0)
    C: float = default_reference_gain()
    P_t_dbm: float = 23.0
    sigma2: float = 0.0
    N_terms: int = 5
    layout: str = "ppp"            # "ppp" or "hex"
    hex_rings: int = 2
    isd_m: float | None = None
    iterations: int = 10_000
    master_seed: int = 0
    thresholds: ThresholdGrid = field(default_factory=ThresholdGrid)
    T_max_db: float = 21.0
    T_c_symbols: int = 200

    def __post_init__(self):
        if self.M < 1 or self.K < 1:
            raise ConfigError("M and K must be >= 1")
        if self.alpha <= 2:
            raise ConfigError("alpha must exceed 2")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ConfigError("epsilon must lie in [0, 1]")
        if self.lambda_b <= 0:
            raise ConfigError("lambda_b must be positive")
        if self.C <= 0:
            raise ConfigError("C must be positive")
        if self.sigma2 < 0:
            raise ConfigError("sigma2 must be >= 0")
        if self.N_terms < 1:
            raise ConfigError("N_terms must be >= 1")
        if self.layout not in ("ppp", "hex"):
            raise ConfigError(f"unknown layout {self.layout!r}")
        if self.layout == "hex" and (self.isd_m is None or self.isd_m <= 0):
            raise ConfigError("hex layout requires a positive isd_m")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")

    @property
    def P_t(self) -> float:
        """Transmit power in watts."""
        return 10.0 ** ((self.P_t_dbm - 30.0) / 10.0)

    @property
    def T_max(self) -> float:
        return 10.0 ** (self.T_max_db / 10.0)

    def require_zf(self):
        if self.M < self.K:
            raise ConfigError(f"ZF requires M >= K, got M={self.M}, K={self.K}")

    def digest(self) -> str:
        payload = {k: v for k, v in self.__dict__.items()
                   if k != "thresholds"}
        payload["thresholds"] = [self.thresholds.min_db, self.thresholds.max_db,
                                 self.thresholds.step_db]
        blob = json.dumps(payload, sort_keys=True, default=float)
        return hashlib.sha256(blob.encode()).hexdigest()[:12]


_KNOWN_KEYS = {
    "M", "K", "alpha", "epsilon", "lambda_b", "isd_m", "C", "P_t_dbm",
    "noise", "N_terms", "layout", "hex_rings", "iterations", "master_seed",
    "thresholds_db", "T_max_db", "T_c_symbols",
}


def _parse_noise(spec) -> float:
    if spec in (None, "off"):
        return 0.0
    if not isinstance(spec, dict):
        raise ConfigError(f"noise: expected 'off' or an object, got {spec!r}")
    if "sigma2_dbm" in spec:
        extra = set(spec) - {"sigma2_dbm"}
        if extra:
            raise ConfigError(f"noise: unknown keys {sorted(extra)}")
        return 10.0 ** ((spec["sigma2_dbm"] - 30.0) / 10.0)
    extra = set(spec) - {"bandwidth_hz", "noise_figure_db"}
    if extra:
        raise ConfigError(f"noise: unknown keys {sorted(extra)}")
    return NoiseModel.thermal(spec.get("bandwidth_hz", 20e6),
                              spec.get("noise_figure_db", 0.0)).sigma2


def config_from_dict(d: dict) -> RunConfig:
    """Build a validated RunConfig from a plain JSON-style dict."""
    unknown = set(d) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kw = {}
    for key in ("M", "K", "alpha", "epsilon", "C", "P_t_dbm", "N_terms",
                "layout", "hex_rings", "iterations", "master_seed",
                "T_max_db", "T_c_symbols"):
        if key in d:
            kw[key] = d[key]
    if "lambda_b" in d and "isd_m" in d:
        raise ConfigError("give either lambda_b or isd_m, not both")
    if "isd_m" in d:
        kw["isd_m"] = d["isd_m"]
        kw["lambda_b"] = isd_to_density(d["isd_m"])
    elif "lambda_b" in d:
        kw["lambda_b"] = d["lambda_b"]
    if "noise" in d:
        kw["sigma2"] = _parse_noise(d["noise"])
    if "thresholds_db" in d:
        t = d["thresholds_db"]
        extra = set(t) - {"min", "max", "step"}
        if extra:
            raise ConfigError(f"thresholds_db: unknown keys {sorted(extra)}")
        kw["thresholds"] = ThresholdGrid(t.get("min", -10.0), t.get("max", 30.0),
                                         t.get("step", 0.5))
    try:
        return RunConfig(**kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def parse_config(path) -> RunConfig:
    """Load and validate a JSON configuration file."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config root must be a JSON object, got {type(data).__name__}")
    return config_from_dict(data)
