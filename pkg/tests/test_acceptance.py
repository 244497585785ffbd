"""Acceptance suite: the twelve release criteria at their stated tolerances.

Each test prints one PASS/FAIL line with the measured figure of merit.
Simulation-backed criteria run 10^4 iterations and take minutes each; the
whole suite runs in roughly half an hour on one core.
"""

import functools
import math

import numpy as np
import pytest

from mmimo.config import config_from_dict
from mmimo.geometry import isd_to_density
from mmimo.montecarlo import analytic_curve, compare_curves, empirical_ccdf, run_uplink_sim
from mmimo.mrc import mrc_ccdf, mrc_ccdf_full_pc, mrc_ccdf_no_pc, mrc_constants
from mmimo.planning import (mrc_scaling_exponent, overhead_and_throughput,
                            scale_antennas, spectral_efficiency)
from mmimo.propagation import (NoiseModel, default_reference_gain,
                               sample_exclusion_ball_interferers)
from mmimo.zf import zf_ccdf, zf_constants

GRID = np.arange(-10.0, 30.5, 0.5)
LAMBDA_500 = isd_to_density(500.0)
THERMAL = NoiseModel.thermal(20e6, 0.0).sigma2
P_T = 10.0 ** ((23.0 - 30.0) / 10.0)
C_REF = default_reference_gain()


def report(num, ok, detail):
    line = f"CRITERION {num:2d}: {'PASS' if ok else 'FAIL'} — {detail}"
    print(line)
    assert ok, line


@functools.lru_cache(maxsize=None)
def mrc_curve(M, K, epsilon, sigma2=0.0, lambda_b=LAMBDA_500):
    c = mrc_constants(M, K, 4.0, epsilon, sigma2=sigma2, P_t=P_T,
                      C=C_REF, lambda_b=lambda_b)
    return analytic_curve(lambda T: mrc_ccdf(T, c), GRID)


@functools.lru_cache(maxsize=None)
def zf_curve(M, K, epsilon, sigma2=0.0, lambda_b=LAMBDA_500):
    z = zf_constants(M, K, 4.0, epsilon, sigma2=sigma2, P_t=P_T,
                     C=C_REF, lambda_b=lambda_b)
    return analytic_curve(lambda T: zf_ccdf(T, z), GRID)


@functools.lru_cache(maxsize=None)
def simulate(receiver, M, K, epsilon, sigma2=0.0, isd=500.0, layout="ppp",
             iterations=10_000, seed=0):
    cfg = config_from_dict({
        "M": M, "K": K, "alpha": 4.0, "epsilon": epsilon, "isd_m": isd,
        "layout": layout, "iterations": iterations, "master_seed": seed,
        "noise": {"sigma2_dbm": 10.0 * math.log10(sigma2) + 30.0}
                 if sigma2 > 0 else "off",
    })
    return run_uplink_sim(cfg, receiver)


def sim_curve(*args, **kwargs):
    return empirical_ccdf(simulate(*args, **kwargs), GRID)


def median_db(samples):
    return 10.0 * math.log10(np.median(samples.values))


def test_criterion_01_special_case_collapse():
    # general evaluator vs the two interference-limited special forms
    no_pc = analytic_curve(lambda T: mrc_ccdf_no_pc(T, 64, 10, 4.0), GRID)
    full_pc = analytic_curve(lambda T: mrc_ccdf_full_pc(T, 64, 10, 4.0), GRID)
    d0 = compare_curves(mrc_curve(64, 10, 0.0), no_pc).max_abs_dev
    d1 = compare_curves(mrc_curve(64, 10, 1.0), full_pc).max_abs_dev
    report(1, d0 <= 1e-3 and d1 <= 1e-3,
           f"max dev eps=0: {d0:.4f}, eps=1: {d1:.4f} (tol 1e-3)")


def test_criterion_02_mrc_analytic_vs_simulation():
    devs = {}
    for M, K, eps in ((64, 10, 0.0), (64, 10, 1.0), (128, 20, 0.0)):
        devs[(M, K, eps)] = compare_curves(
            mrc_curve(M, K, eps), sim_curve("mrc", M, K, eps)).max_abs_dev
    worst = max(devs.values())
    detail = ", ".join(f"({M},{K},{e:g}): {d:.4f}" for (M, K, e), d in devs.items())
    report(2, worst <= 0.04, f"max dev {detail} (tol 0.04)")


def test_criterion_03_zf_analytic_vs_simulation():
    devs = {}
    for M, K in ((64, 10), (128, 20)):
        devs[(M, K)] = compare_curves(
            zf_curve(M, K, 0.0), sim_curve("zf", M, K, 0.0)).max_abs_dev
    worst = max(devs.values())
    detail = ", ".join(f"({M},{K}): {d:.4f}" for (M, K), d in devs.items())
    report(3, worst <= 0.04, f"max dev {detail} (tol 0.04)")


def test_criterion_04_zf_linear_scaling():
    d = compare_curves(zf_curve(64, 10, 0.0), zf_curve(129, 20, 0.0)).max_abs_dev
    report(4, d <= 0.02, f"(64,10) vs (129,20) max dev {d:.4f} (tol 0.02)")


def test_criterion_05_mrc_superlinear_scaling():
    s = mrc_scaling_exponent(4.0, 0.0)
    m_scaled = scale_antennas(64, 10, 20, s)
    d_good = compare_curves(mrc_curve(64, 10, 0.0),
                            mrc_curve(m_scaled, 20, 0.0)).max_abs_dev
    d_linear = compare_curves(mrc_curve(64, 10, 0.0),
                              mrc_curve(128, 20, 0.0)).max_abs_dev
    report(5, d_good <= 0.02 and d_linear >= 0.05,
           f"s=2 scaling (M={m_scaled}) dev {d_good:.4f} (tol 0.02); "
           f"linear scaling dev {d_linear:.4f} (must be >= 0.05)")


def test_criterion_06_zf_matches_mrc():
    d = compare_curves(mrc_curve(64, 5, 0.0), zf_curve(12, 5, 0.0)).max_abs_dev
    report(6, d <= 0.04, f"MRC(64,5) vs ZF(12,5) max dev {d:.4f} (tol 0.04)")


def test_criterion_07_zf_dominance():
    m0 = sim_curve("mrc", 64, 20, 0.0)
    z0 = sim_curve("zf", 64, 20, 0.0)
    undershoot = float(np.max(m0.probabilities - z0.probabilities))
    m1 = sim_curve("mrc", 64, 20, 1.0)
    z1 = sim_curve("zf", 64, 20, 1.0)
    gap1 = float(np.abs(z1.probabilities - m1.probabilities).max())
    report(7, undershoot <= 0.01 and gap1 <= 0.03,
           f"eps=0 max(MRC-ZF) {undershoot:.4f} (tol 0.01); "
           f"eps=1 max |gap| {gap1:.4f} (tol 0.03)")


def test_criterion_08_noise_regime():
    gaps = {}
    for isd in (500.0, 1000.0):
        for rx in ("mrc", "zf"):
            sir = simulate(rx, 64, 10, 0.0, sigma2=0.0, isd=isd, iterations=4000)
            sinr = simulate(rx, 64, 10, 0.0, sigma2=THERMAL, isd=isd,
                            iterations=4000)
            gaps[(rx, isd)] = abs(median_db(sir) - median_db(sinr))
    ok = (gaps[("mrc", 500.0)] <= 1.0 and gaps[("zf", 500.0)] <= 1.0
          and gaps[("zf", 1000.0)] > 1.0)
    report(8, ok,
           "median SIR-SINR gaps (dB): "
           + ", ".join(f"{rx}@{int(isd)}m: {g:.2f}" for (rx, isd), g in gaps.items())
           + " (<=1 at 500 m, ZF >1 at 1000 m)")


def test_criterion_09_campbell_oracle():
    lam, alpha, C = LAMBDA_500, 4.0, 1.0
    rng = np.random.default_rng(9)
    region = 10.0 / math.sqrt(lam)
    total = 0.0
    draws = 100_000
    for _ in range(draws):
        pts = sample_exclusion_ball_interferers(lam, region, rng)
        r = np.linalg.norm(pts, axis=1)
        total += float(np.sum(C * r ** -alpha))
    mean = total / draws
    target = 2.0 * C * (lam * math.pi) ** (alpha / 2.0) / (alpha - 2.0)
    rel = abs(mean - target) / target
    report(9, rel <= 0.02,
           f"mean interference {mean:.4e} vs closed form {target:.4e} "
           f"(rel dev {rel:.3%}, tol 2%)")


def _tau0(receiver, M, K, epsilon, t_max_db=21.0):
    grid = np.arange(-30.0, t_max_db + 1.0, 0.5)
    if receiver == "mrc":
        c = mrc_constants(M, K, 4.0, epsilon, sigma2=THERMAL, P_t=P_T,
                          C=C_REF, lambda_b=LAMBDA_500)
        curve = analytic_curve(lambda T: mrc_ccdf(T, c), grid)
    else:
        z = zf_constants(M, K, 4.0, epsilon, sigma2=THERMAL, P_t=P_T,
                         C=C_REF, lambda_b=LAMBDA_500)
        curve = analytic_curve(lambda T: zf_ccdf(T, z), grid)
    return spectral_efficiency(curve, 10.0 ** (t_max_db / 10.0))


def test_criterion_10_rate_optimum_epsilon():
    eps_grid = np.round(np.arange(0.0, 1.01, 0.1), 1)
    best = {}
    for rx in ("mrc", "zf"):
        taus = [_tau0(rx, 64, 10, e) for e in eps_grid]
        best[rx] = float(eps_grid[int(np.argmax(taus))])
    ok = abs(best["mrc"] - 0.5) <= 0.15 and abs(best["zf"] - 0.2) <= 0.15
    report(10, ok, f"argmax tau0: MRC {best['mrc']:.1f} (target 0.5±0.15), "
                   f"ZF {best['zf']:.1f} (target 0.2±0.15)")


def test_criterion_11_hexagonal_transfer():
    base_m = empirical_ccdf(
        simulate("mrc", 32, 5, 0.0, isd=300.0, layout="hex"), GRID)
    scaled_m = empirical_ccdf(
        simulate("mrc", 131, 10, 0.0, isd=300.0, layout="hex"), GRID)
    base_z = empirical_ccdf(
        simulate("zf", 32, 5, 0.0, isd=300.0, layout="hex"), GRID)
    scaled_z = empirical_ccdf(
        simulate("zf", 65, 10, 0.0, isd=300.0, layout="hex"), GRID)
    d_m = compare_curves(base_m, scaled_m).max_abs_dev
    d_z = compare_curves(base_z, scaled_z).max_abs_dev
    report(11, d_m <= 0.05 and d_z <= 0.05,
           f"19-cell grid: MRC (32,5)->(131,10) dev {d_m:.4f}, "
           f"ZF (32,5)->(65,10) dev {d_z:.4f} (tol 0.05)")


def test_criterion_12_throughput_saturation():
    k_grid = list(range(4, 61, 4))
    cell = {}
    for rx, eps in (("mrc", 0.5), ("zf", 0.2)):
        vals = []
        for k in k_grid:
            tau0 = _tau0(rx, 64, k, eps)
            vals.append(overhead_and_throughput(k, 200, tau0).tau_cell)
        cell[rx] = vals
    mrc_at_32 = cell["mrc"][k_grid.index(32)]
    mrc_ok = mrc_at_32 >= 0.95 * max(cell["mrc"])
    zf_argmax = k_grid[int(np.argmax(cell["zf"]))]
    zf_ok = abs(zf_argmax - 32) <= 4
    report(12, mrc_ok and zf_ok,
           f"MRC tau_cell at K=32: {mrc_at_32:.2f} vs max {max(cell['mrc']):.2f} "
           f"(within 5%: {mrc_ok}); ZF argmax K={zf_argmax} (target 32±4)")
