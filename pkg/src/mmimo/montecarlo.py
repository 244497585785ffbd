"""End-to-end Monte Carlo harness and coverage-curve utilities.

Each iteration draws a fresh network, associates and schedules users,
aggregates the link budget and evaluates the typical user's conditional
SINR under the requested receiver. Iterations use independent RNG streams
spawned from (master_seed, iteration index), so results are bit-identical
regardless of how many worker threads run them.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .geometry import (SchedulingMode, associate_and_schedule, build_hex_grid,
                       sample_ppp)
from .mrc import mrc_conditional_sinr
from .propagation import (NoiseModel, PathLossModel, PowerControl, link_budget)
from .zf import zf_conditional_sinr

__all__ = [
    "SinrSamples",
    "CcdfCurve",
    "CompareReport",
    "MonteCarloError",
    "run_uplink_sim",
    "empirical_ccdf",
    "analytic_curve",
    "compare_curves",
    "dump_samples_csv",
    "dump_curve_csv",
    "load_curve_csv",
]


class MonteCarloError(ValueError):
    pass


@dataclass
class SinrSamples:
    """Linear SINR samples of the typical user (may contain +inf)."""

    values: np.ndarray
    receiver: str
    count: int

    def __post_init__(self):
        self.values = np.asarray(self.values, float)
        if self.count != self.values.shape[0]:
            raise MonteCarloError("count does not match number of samples")


@dataclass
class CcdfCurve:
    """Coverage probabilities on an ascending dB threshold grid."""

    thresholds_db: np.ndarray
    probabilities: np.ndarray
    source: str                      # "analytic" or "empirical"
    meta: str = ""                   # RunConfig digest

    def __post_init__(self):
        self.thresholds_db = np.asarray(self.thresholds_db, float)
        self.probabilities = np.asarray(self.probabilities, float)
        if self.thresholds_db.shape != self.probabilities.shape:
            raise MonteCarloError("grid and probabilities must align")
        if np.any(np.diff(self.thresholds_db) <= 0):
            raise MonteCarloError("threshold grid must be strictly ascending")


@dataclass
class CompareReport:
    """Pointwise deviation between two curves on a shared grid."""

    max_abs_dev: float
    argmax_threshold_db: float
    deviations: np.ndarray


def _workers(iterations: int) -> int:
    cap = os.environ.get("MMIMO_THREADS", "")
    try:
        w = max(1, int(cap)) if cap else 1
    except ValueError:
        w = 1
    return min(w, iterations)


def _simulate_one(i: int, cfg: RunConfig, receiver: str, master_seed: int,
                  model: PathLossModel, pc: PowerControl, noise: NoiseModel,
                  hex_bs, user_radius: float) -> float:
    rng = np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(i,)))
    if hex_bs is not None:
        bs = hex_bs
    else:
        bs = sample_ppp(cfg.lambda_b, user_radius, rng)
        while bs.shape[0] == 0:
            bs = sample_ppp(cfg.lambda_b, user_radius, rng)
    users = sample_ppp(60.0 * cfg.lambda_b, user_radius, rng)
    real = associate_and_schedule(bs, users, cfg.K,
                                  SchedulingMode.PPP_THINNING, rng)
    lb = link_budget(real, model, pc, noise)
    if receiver == "mrc":
        return mrc_conditional_sinr(lb, cfg.M, cfg.K, cfg.epsilon)
    return zf_conditional_sinr(lb, cfg.M, cfg.K, cfg.epsilon,
                               sigma2=noise.sigma2, P_t=pc.P_t)


def run_uplink_sim(cfg: RunConfig, receiver: str,
                   iterations: int | None = None,
                   master_seed: int | None = None) -> SinrSamples:
    """Simulate the typical user's SINR over many independent network draws."""
    if receiver not in ("mrc", "zf"):
        raise MonteCarloError(f"unknown receiver {receiver!r}")
    if receiver == "zf":
        cfg.require_zf()
    iterations = cfg.iterations if iterations is None else iterations
    master_seed = cfg.master_seed if master_seed is None else master_seed
    if iterations < 1:
        raise MonteCarloError("iterations must be >= 1")

    model = PathLossModel(C=cfg.C, alpha=cfg.alpha)
    pc = PowerControl(epsilon=cfg.epsilon, P_t=cfg.P_t)
    noise = NoiseModel(sigma2=cfg.sigma2)
    if cfg.layout == "hex":
        hex_bs = build_hex_grid(cfg.isd_m, cfg.hex_rings)
        user_radius = (cfg.hex_rings + 1) * cfg.isd_m
    else:
        hex_bs = None
        user_radius = 10.0 / math.sqrt(cfg.lambda_b)

    def one(i):
        return _simulate_one(i, cfg, receiver, master_seed, model, pc, noise,
                             hex_bs, user_radius)

    w = _workers(iterations)
    if w > 1:
        with ThreadPoolExecutor(max_workers=w) as ex:
            vals = list(ex.map(one, range(iterations)))
    else:
        vals = [one(i) for i in range(iterations)]
    return SinrSamples(np.array(vals), receiver, iterations)


def empirical_ccdf(samples: SinrSamples, thresholds_db) -> CcdfCurve:
    """Fraction of samples exceeding each threshold; +inf counts everywhere."""
    if samples.count == 0:
        raise MonteCarloError("no samples")
    thresholds_db = np.asarray(thresholds_db, float)
    t_lin = 10.0 ** (thresholds_db / 10.0)
    probs = (samples.values[None, :] > t_lin[:, None]).mean(axis=1)
    return CcdfCurve(thresholds_db, probs, source="empirical")


def analytic_curve(evaluator, thresholds_db, meta: str = "") -> CcdfCurve:
    """Evaluate a CCDF function of linear threshold on a dB grid."""
    thresholds_db = np.asarray(thresholds_db, float)
    probs = np.array([evaluator(10.0 ** (t / 10.0)) for t in thresholds_db])
    return CcdfCurve(thresholds_db, probs, source="analytic", meta=meta)


def compare_curves(a: CcdfCurve, b: CcdfCurve) -> CompareReport:
    """Pointwise absolute deviation between curves sharing one grid."""
    if a.thresholds_db.shape != b.thresholds_db.shape or \
            not np.allclose(a.thresholds_db, b.thresholds_db):
        raise MonteCarloError("curves use different threshold grids")
    dev = np.abs(a.probabilities - b.probabilities)
    i = int(np.argmax(dev))
    return CompareReport(float(dev[i]), float(a.thresholds_db[i]), dev)


def dump_samples_csv(samples: SinrSamples, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iteration", "sinr_db"])
        for i, v in enumerate(samples.values):
            w.writerow([i, "inf" if math.isinf(v) else f"{10.0 * math.log10(v):.6f}"])


def dump_curve_csv(curve: CcdfCurve, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["threshold_db", "ccdf"])
        for t, p in zip(curve.thresholds_db, curve.probabilities):
            w.writerow([f"{t:g}", f"{p:.6f}"])


def load_curve_csv(path) -> CcdfCurve:
    th, pr = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["threshold_db", "ccdf"]:
            raise MonteCarloError(f"unexpected CSV header in {path}")
        for row in reader:
            th.append(float(row["threshold_db"]))
            pr.append(float(row["ccdf"]))
    return CcdfCurve(np.array(th), np.array(pr), source="empirical")
