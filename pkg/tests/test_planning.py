import math

import numpy as np
import pytest

from mmimo.montecarlo import CcdfCurve
from mmimo.planning import (PlanningError, RateParams, ScalingSpec,
                            mrc_scaling_exponent, overhead_and_throughput,
                            scale_antennas, spectral_efficiency, zf_match_mrc)


class TestScalingExponent:
    def test_values(self):
        assert mrc_scaling_exponent(4.0, 0.0) == 2.0
        assert mrc_scaling_exponent(4.0, 1.0) == 1.0
        assert mrc_scaling_exponent(4.0, 0.5) == 1.5

    def test_boundary_collapse(self):
        for eps in (0.0, 0.3, 1.0):
            assert mrc_scaling_exponent(2.0001, eps) == pytest.approx(1.0, abs=1e-4)

    def test_validation(self):
        with pytest.raises(PlanningError):
            mrc_scaling_exponent(2.0, 0.0)
        with pytest.raises(PlanningError):
            mrc_scaling_exponent(4.0, 1.5)


class TestScaleAntennas:
    def test_linear_doubling(self):
        assert scale_antennas(64, 10, 20, 1.0) == 129

    def test_superlinear(self):
        assert scale_antennas(32, 5, 10, 2.0) == 131
        assert scale_antennas(64, 10, 20, 2.0) == 259

    def test_validation(self):
        with pytest.raises(PlanningError):
            scale_antennas(64, 0, 10, 2.0)


class TestZfMatchMrc:
    def test_full_inversion_identity(self):
        assert zf_match_mrc(64, 5, 4.0, 1.0) == 64

    def test_alpha2_identity(self):
        assert zf_match_mrc(64, 5, 2.0, 0.0) == 64

    def test_fig_protocol(self):
        with pytest.warns(UserWarning):
            assert zf_match_mrc(64, 5, 4.0, 0.0) == 12

    def test_xi_monotonicity(self):
        xi = lambda K, eps: K ** (-(4.0 / 2 - 1) * (1 - eps))
        assert xi(1, 0.0) == 1.0
        assert xi(10, 0.0) < xi(5, 0.0)
        assert xi(10, 0.5) > xi(10, 0.0)


class TestSpectralEfficiency:
    def test_deterministic_cap(self):
        assert spectral_efficiency(lambda x: 1.0, 10.0) == pytest.approx(
            math.log2(11.0), rel=1e-6)

    def test_zero_coverage(self):
        assert spectral_efficiency(lambda x: 0.0, 10.0) == pytest.approx(0.0)

    def test_rational_ccdf_closed_form(self):
        t_max = 10.0 ** 2.1
        val = spectral_efficiency(lambda x: 1.0 / (1.0 + x), t_max)
        assert val == pytest.approx((1.0 - 1.0 / (1.0 + t_max)) / math.log(2.0),
                                    rel=1e-6)

    def test_curve_input(self):
        grid = np.arange(-10.0, 30.5, 0.5)
        curve = CcdfCurve(grid, np.ones_like(grid), source="analytic")
        assert spectral_efficiency(curve, 10.0) == pytest.approx(
            math.log2(11.0), rel=1e-4)

    def test_extrapolation_error(self):
        grid = np.arange(-10.0, 10.5, 0.5)
        curve = CcdfCurve(grid, np.ones_like(grid), source="analytic")
        with pytest.raises(PlanningError):
            spectral_efficiency(curve, 10.0 ** 2.1)


class TestOverheadAndThroughput:
    def test_psi(self):
        res = overhead_and_throughput(10, 40, 2.0)
        assert res.psi == 0.25
        assert res.tau0_bar == pytest.approx(1.5)
        assert res.tau_cell == pytest.approx(15.0)

    def test_vanishing_overhead(self):
        res = overhead_and_throughput(10, 10_000_000, 2.0)
        assert res.tau0_bar == pytest.approx(2.0, rel=1e-5)

    def test_frame_overflow(self):
        with pytest.raises(PlanningError):
            overhead_and_throughput(40, 40, 2.0)

    def test_cell_identity(self):
        res = overhead_and_throughput(7, 200, 1.3)
        assert res.tau_cell == pytest.approx(7 * res.tau0_bar, rel=1e-12)


class TestTypes:
    def test_scaling_spec_validation(self):
        ScalingSpec(s=2.0, xi=0.5)
        with pytest.raises(PlanningError):
            ScalingSpec(s=0.5, xi=0.5)
        with pytest.raises(PlanningError):
            ScalingSpec(s=2.0, xi=1.5)

    def test_rate_params(self):
        p = RateParams(T_max=125.9, T_c=200, T_t=10)
        assert p.psi == pytest.approx(0.05)
        with pytest.raises(PlanningError):
            RateParams(T_max=125.9, T_c=10, T_t=10)
