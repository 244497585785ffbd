"""Uplink SINR coverage and rate for stochastic-geometry massive MIMO networks.

Monte Carlo simulation and closed-form evaluation of the uplink SINR
distribution for MRC and ZF receivers under fractional power control,
plus antenna-scaling and throughput calculators.
"""

from .config import RunConfig, ThresholdGrid, config_from_dict, parse_config
from .geometry import (GeometryConfig, NetworkRealization, SchedulingMode,
                       build_hex_grid, isd_to_density, sample_ppp)
from .montecarlo import (CcdfCurve, CompareReport, SinrSamples, analytic_curve,
                         compare_curves, empirical_ccdf, run_uplink_sim)
from .mrc import (MrcConstants, mrc_ccdf, mrc_ccdf_full_pc, mrc_ccdf_no_pc,
                  mrc_conditional_sinr, mrc_constants)
from .planning import (RateParams, RateResult, ScalingSpec,
                       mrc_scaling_exponent, overhead_and_throughput,
                       scale_antennas, spectral_efficiency, zf_match_mrc)
from .propagation import (LinkBudget, NoiseModel, PathLossModel, PowerControl,
                          link_budget, path_loss, tx_power)
from .zf import ZfConstants, zf_ccdf, zf_conditional_sinr, zf_constants

__version__ = "0.1.0"
