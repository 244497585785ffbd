"""Command-line front end: config ingestion, subcommands, CSV/JSON emission.

Subcommands: simulate (empirical coverage curve), analytic (closed-form
curve), compare (deviation report between analytic and simulation, or two
curve files), scaling (antenna scaling calculators), rate (spectral
efficiency and throughput), sweep (rate across an epsilon or K grid).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import montecarlo
from .config import ConfigError, RunConfig, config_from_dict, parse_config
from .mrc import mrc_ccdf, mrc_ccdf_full_pc, mrc_ccdf_no_pc, mrc_constants
from .planning import (mrc_scaling_exponent, overhead_and_throughput,
                       scale_antennas, spectral_efficiency, zf_match_mrc)
from .zf import zf_ccdf, zf_constants

__all__ = ["main", "analytic_evaluator"]


def analytic_evaluator(cfg: RunConfig, receiver: str, formula: str = "general"):
    """Closed-form CCDF as a function of the linear threshold.

    formula: "general" (any epsilon, with noise), "full-pc" (epsilon=1,
    no noise) or "no-pc" (epsilon=0, no noise); the latter two are MRC-only.
    """
    if receiver == "zf":
        if formula != "general":
            raise ConfigError("ZF provides only the general formula")
        consts = zf_constants(cfg.M, cfg.K, cfg.alpha, cfg.epsilon,
                              sigma2=cfg.sigma2, P_t=cfg.P_t, C=cfg.C,
                              lambda_b=cfg.lambda_b)
        return lambda T: zf_ccdf(T, consts, N=cfg.N_terms)
    if formula == "general":
        consts = mrc_constants(cfg.M, cfg.K, cfg.alpha, cfg.epsilon,
                               sigma2=cfg.sigma2, P_t=cfg.P_t, C=cfg.C,
                               lambda_b=cfg.lambda_b, N=cfg.N_terms)
        return lambda T: mrc_ccdf(T, consts)
    if formula == "full-pc":
        return lambda T: mrc_ccdf_full_pc(T, cfg.M, cfg.K, cfg.alpha, cfg.N_terms)
    if formula == "no-pc":
        return lambda T: mrc_ccdf_no_pc(T, cfg.M, cfg.K, cfg.alpha, cfg.N_terms)
    raise ConfigError(f"unknown formula {formula!r}")


def _load_config(args) -> RunConfig:
    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
    for item in args.set or []:
        key, _, value = item.partition("=")
        if not _:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        data[key] = json.loads(value)
    return config_from_dict(data)


def _emit_curve(curve, out):
    if out:
        montecarlo.dump_curve_csv(curve, out)
    else:
        w = csv.writer(sys.stdout)
        w.writerow(["threshold_db", "ccdf"])
        for t, p in zip(curve.thresholds_db, curve.probabilities):
            w.writerow([f"{t:g}", f"{p:.6f}"])


def _emit_json(payload, out):
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_simulate(args):
    cfg = _load_config(args)
    samples = montecarlo.run_uplink_sim(cfg, args.receiver)
    if args.samples_out:
        montecarlo.dump_samples_csv(samples, args.samples_out)
    curve = montecarlo.empirical_ccdf(samples, cfg.thresholds.values())
    curve.meta = cfg.digest()
    _emit_curve(curve, args.out)
    return 0


def _cmd_analytic(args):
    cfg = _load_config(args)
    ev = analytic_evaluator(cfg, args.receiver, args.formula)
    curve = montecarlo.analytic_curve(ev, cfg.thresholds.values(),
                                      meta=cfg.digest())
    _emit_curve(curve, args.out)
    return 0


def _cmd_compare(args):
    if args.a or args.b:
        if not (args.a and args.b):
            raise ConfigError("compare needs both --a and --b, or a config")
        a = montecarlo.load_curve_csv(args.a)
        b = montecarlo.load_curve_csv(args.b)
    else:
        cfg = _load_config(args)
        ev = analytic_evaluator(cfg, args.receiver, args.formula)
        grid = cfg.thresholds.values()
        a = montecarlo.analytic_curve(ev, grid, meta=cfg.digest())
        b = montecarlo.empirical_ccdf(montecarlo.run_uplink_sim(cfg, args.receiver),
                                      grid)
    report = montecarlo.compare_curves(a, b)
    _emit_json({
        "max_abs_dev": report.max_abs_dev,
        "argmax_threshold_db": report.argmax_threshold_db,
        "deviations": report.deviations.tolist(),
    }, args.out)
    return 0


def _cmd_scaling(args):
    cfg = _load_config(args)
    s = mrc_scaling_exponent(cfg.alpha, cfg.epsilon)
    payload = {"s": s}
    if args.receiver == "zf" and args.match_mrc is not None:
        k = args.k if args.k is not None else cfg.K
        m_zf = zf_match_mrc(args.match_mrc, k, cfg.alpha, cfg.epsilon)
        payload.update({"xi": k ** (-(cfg.alpha / 2.0 - 1.0) * (1.0 - cfg.epsilon)),
                        "M_zf": m_zf, "K": k,
                        "validity_ok": m_zf >= 3 * k})
    elif args.k_new is not None:
        payload.update({"M_new": scale_antennas(cfg.M, cfg.K, args.k_new, s),
                        "K_new": args.k_new})
    _emit_json(payload, args.out)
    return 0


def _cmd_rate(args):
    cfg = _load_config(args)
    ev = analytic_evaluator(cfg, args.receiver, args.formula)
    tau0 = spectral_efficiency(ev, cfg.T_max)
    res = overhead_and_throughput(cfg.K, cfg.T_c_symbols, tau0)
    _emit_json({"tau0": res.tau0, "tau0_bar": res.tau0_bar,
                "tau_cell": res.tau_cell, "psi": res.psi}, args.out)
    return 0


def _cmd_sweep(args):
    cfg = _load_config(args)
    values = [json.loads(v) for v in args.values.split(",")]
    rows = []
    for v in values:
        d = {"param": args.param, "value": v}
        if args.param == "epsilon":
            sub = config_from_dict({"M": cfg.M, "K": cfg.K, "alpha": cfg.alpha,
                                    "epsilon": v, "lambda_b": cfg.lambda_b,
                                    "T_c_symbols": cfg.T_c_symbols})
        elif args.param == "K":
            sub = config_from_dict({"M": cfg.M, "K": v, "alpha": cfg.alpha,
                                    "epsilon": cfg.epsilon, "lambda_b": cfg.lambda_b,
                                    "T_c_symbols": cfg.T_c_symbols})
        else:
            raise ConfigError(f"sweep supports epsilon or K, not {args.param!r}")
        ev = analytic_evaluator(sub, args.receiver)
        tau0 = spectral_efficiency(ev, cfg.T_max)
        res = overhead_and_throughput(sub.K, sub.T_c_symbols, tau0)
        d.update({"tau0": res.tau0, "tau0_bar": res.tau0_bar,
                  "tau_cell": res.tau_cell})
        rows.append(d)
    out = args.out
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=["param", "value", "tau0",
                                           "tau0_bar", "tau_cell"])
        w.writeheader()
        w.writerows(rows)
    finally:
        if out:
            fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mmimo",
                                description="Uplink SINR coverage and rate for "
                                "stochastic-geometry massive MIMO networks")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, receiver=True):
        sp.add_argument("--config", help="JSON configuration file")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a config key (JSON-encoded value)")
        sp.add_argument("--out", help="output file (default stdout)")
        if receiver:
            sp.add_argument("--receiver", choices=["mrc", "zf"], default="mrc")

    sp = sub.add_parser("simulate", help="Monte Carlo coverage curve")
    common(sp)
    sp.add_argument("--samples-out", help="also dump per-iteration SINR CSV")
    sp.set_defaults(fn=_cmd_simulate)

    sp = sub.add_parser("analytic", help="closed-form coverage curve")
    common(sp)
    sp.add_argument("--formula", choices=["general", "full-pc", "no-pc"],
                    default="general")
    sp.set_defaults(fn=_cmd_analytic)

    sp = sub.add_parser("compare", help="deviation between two curves")
    common(sp)
    sp.add_argument("--formula", choices=["general", "full-pc", "no-pc"],
                    default="general")
    sp.add_argument("--a", help="first curve CSV (else: analytic from config)")
    sp.add_argument("--b", help="second curve CSV (else: simulation from config)")
    sp.set_defaults(fn=_cmd_compare)

    sp = sub.add_parser("scaling", help="antenna scaling calculators")
    common(sp)
    sp.add_argument("--match-mrc", type=int, metavar="M_MRC",
                    help="MRC antenna count a ZF deployment should match")
    sp.add_argument("--k", type=int, help="user count for the ZF match")
    sp.add_argument("--k-new", type=int, help="target user count for MRC scaling")
    sp.set_defaults(fn=_cmd_scaling)

    sp = sub.add_parser("rate", help="spectral efficiency and throughput")
    common(sp)
    sp.add_argument("--formula", choices=["general", "full-pc", "no-pc"],
                    default="general")
    sp.set_defaults(fn=_cmd_rate)

    sp = sub.add_parser("sweep", help="rate metrics across a parameter grid")
    common(sp)
    sp.add_argument("--param", choices=["epsilon", "K"], required=True)
    sp.add_argument("--values", required=True,
                    help="comma-separated parameter values")
    sp.set_defaults(fn=_cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, montecarlo.MonteCarloError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
