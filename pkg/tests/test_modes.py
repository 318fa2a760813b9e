import dataclasses
import math

import numpy as np
import pytest

from muxrepeater.link import visibility_at
from muxrepeater.modes import (
    ModeSpace,
    gamma_from_temperature,
    mode_count,
    mode_measure,
    round_to_one_digit,
    tau_of_k,
    weighted_average,
)
from muxrepeater.params import ModeSpaceParams, PhysicalConstants
from muxrepeater.werner import entanglement_of_formation

RB87_MASS = 1.44316e-25
# sqrt(m / (k_B T)) at 1 uK, unit-converted, 30-digit evaluation
GAMMA_EXACT = 102238.76627741638
# (2/3) (K_max^3 - K_min^3) / (K_max^2 - K_min^2) on [10, 1000]
WAVG_K_CLOSED = 666.7326732673267


class TestThermalConstant:
    def test_one_microkelvin(self):
        assert gamma_from_temperature(1e-6, RB87_MASS) == \
            pytest.approx(GAMMA_EXACT, rel=1e-12)

    def test_sqrt_temperature_scaling(self):
        g1 = gamma_from_temperature(1e-6, RB87_MASS)
        g4 = gamma_from_temperature(4e-6, RB87_MASS)
        assert g4 == pytest.approx(g1 / 2.0, rel=1e-12)

    def test_rejects_nonpositive_temperature(self):
        with pytest.raises(ValueError):
            gamma_from_temperature(0.0, RB87_MASS)

    def test_rounding_policy(self):
        assert round_to_one_digit(GAMMA_EXACT) == 1e5
        assert round_to_one_digit(9.6e4) == 1e5
        assert round_to_one_digit(5.112e4) == 5e4

    def test_default_space_uses_rounded_gamma(self):
        assert ModeSpace.default().gamma == 1e5

    def test_exact_policy(self):
        params = ModeSpaceParams(gamma_policy="exact")
        space = ModeSpace.from_params(params, PhysicalConstants())
        assert space.gamma == pytest.approx(GAMMA_EXACT, rel=1e-12)


class TestLifetimeLaw:
    def test_band_edges_exact(self):
        assert tau_of_k(10.0, 1e5) == 10_000.0
        assert tau_of_k(1000.0, 1e5) == 100.0
        assert tau_of_k(100.0, 1e5) == 1000.0

    def test_rejects_nonpositive_wavevector(self):
        with pytest.raises(ValueError):
            tau_of_k(0.0, 1e5)

    def test_band_edge_ordering(self):
        space = ModeSpace.default()
        assert tau_of_k(space.k_min, space.gamma) >= tau_of_k(space.k_max, space.gamma)


class TestModeCount:
    def test_default_band(self):
        assert mode_count(ModeSpace.default()) == 5497

    def test_narrow_band(self):
        space = dataclasses.replace(ModeSpace.default(), k_max=100.0)
        assert mode_count(space) == 54

    def test_empty_band(self):
        space = dataclasses.replace(ModeSpace.default(), k_max=10.0)
        assert mode_count(space) == 0

    def test_linear_in_density(self):
        space = ModeSpace.default()
        doubled = dataclasses.replace(space, beta=2 * space.beta)
        assert mode_measure(doubled) == pytest.approx(2 * mode_measure(space),
                                                      rel=1e-12)

    def test_measure_closed_form(self):
        assert mode_measure(ModeSpace.default()) == \
            pytest.approx(5497.23736506776, rel=1e-12)


class TestWeightedAverage:
    def test_constant_is_exact(self):
        space = ModeSpace.default()
        for c in (1.0, math.pi, 1e-7):
            assert weighted_average(space, lambda k: np.full_like(k, c)) == \
                pytest.approx(c, rel=1e-12)

    def test_identity_matches_closed_form(self):
        space = ModeSpace.default()
        assert weighted_average(space, lambda k: k) == \
            pytest.approx(WAVG_K_CLOSED, rel=1e-7)

    def _ef_integrand(self, space):
        def f(k):
            v = visibility_at(750.0, space.gamma / k, 0.05)
            return entanglement_of_formation(v)
        return f

    def test_quadrature_convergence_on_ebit_integrand(self):
        space = ModeSpace.default()
        fine = dataclasses.replace(space, grid_points=2 * space.grid_points)
        coarse_val = weighted_average(space, self._ef_integrand(space))
        fine_val = weighted_average(fine, self._ef_integrand(fine))
        assert abs(fine_val - coarse_val) / abs(fine_val) < 1e-6

    def test_identity_converges_under_refinement(self):
        space = ModeSpace.default()
        fine = dataclasses.replace(space, grid_points=4 * space.grid_points)
        err_coarse = abs(weighted_average(space, lambda k: k) - WAVG_K_CLOSED)
        err_fine = abs(weighted_average(fine, lambda k: k) - WAVG_K_CLOSED)
        assert err_fine < err_coarse
