"""Tests for src/initial_conditions.py."""

import math

import numpy as np
import pytest

from src.config import RunConfig
from src.diagnostics import h3_norms
from src.initial_conditions import (
    build_initial_state,
    orszag_tang,
    random_band_limited,
    single_mode,
    zero_state,
)
from src.model import state_invariant_defects
from src.spectral import ParameterDomainError, PreconditionError, SpectralGrid, dealias


@pytest.fixture
def grid64():
    return SpectralGrid(64)


def _random(grid, **overrides):
    kwargs = dict(seed=5, k_min=1, k_max=8, spectrum_slope=-2.0, target_h3_v=5.0, target_h3_b=5.0)
    kwargs.update(overrides)
    return random_band_limited(grid, **kwargs)


class TestDeterministicStates:
    def test_zero_state(self, grid8):
        state = zero_state(grid8)
        assert state.t == 0.0
        assert not state.w.coeffs.any() and not state.a.coeffs.any()

    def test_orszag_tang_physical_fields(self, grid64):
        state = orszag_tang(grid64)
        x, y = grid64.coordinates()
        assert np.allclose(state.w.physical(), -2.0 * (np.cos(x) + np.cos(y)), atol=1e-13)
        assert np.allclose(state.a.physical(), 0.5 * np.cos(2.0 * x) + np.cos(y), atol=1e-13)

    def test_orszag_tang_vorticity_norm(self, grid64):
        state = orszag_tang(grid64)
        assert grid64.length * math.sqrt(np.sum(np.abs(state.w.coeffs) ** 2)) == pytest.approx(4.0 * math.pi)

    def test_zero_amplitudes(self, grid64):
        state = orszag_tang(grid64, amplitude_w=0.0, amplitude_a=0.0)
        assert not state.w.coeffs.any() and not state.a.coeffs.any()

    def test_single_mode(self, grid64):
        state = single_mode(grid64, amplitude_w=3.0, amplitude_a=2.0)
        x, _ = grid64.coordinates()
        assert np.allclose(state.w.physical(), 3.0 * np.cos(x), atol=1e-13)
        assert np.allclose(state.a.physical(), 2.0 * np.cos(x), atol=1e-13)

    @pytest.mark.parametrize("factory", [zero_state, orszag_tang, single_mode])
    def test_invariants(self, grid64, factory):
        defects = state_invariant_defects(factory(grid64))
        assert max(defects.values()) < 1e-15


class TestRandomBandLimited:
    @pytest.mark.parametrize("targets", [(5.0, 5.0), (1.0, 30.0), (0.25, 0.0)])
    def test_hits_h3_targets(self, grid64, targets):
        state = _random(grid64, target_h3_v=targets[0], target_h3_b=targets[1])
        h3_v, h3_b = h3_norms(state)
        assert h3_v == pytest.approx(targets[0], rel=1e-12, abs=1e-300)
        assert h3_b == pytest.approx(targets[1], rel=1e-12, abs=1e-300)

    def test_deterministic_for_seed(self, grid64):
        first, second = _random(grid64), _random(grid64)
        assert np.array_equal(first.w.coeffs, second.w.coeffs)
        assert np.array_equal(first.a.coeffs, second.a.coeffs)

    def test_seeds_differ(self, grid64):
        assert not np.array_equal(_random(grid64, seed=1).w.coeffs, _random(grid64, seed=2).w.coeffs)

    def test_support_on_annulus(self, grid64):
        state = _random(grid64, k_min=3, k_max=6)
        radius = np.sqrt(grid64.kx ** 2 + grid64.ky ** 2)
        outside = (radius < 3) | (radius > 6)
        assert not state.w.coeffs[outside].any() and not state.a.coeffs[outside].any()
        assert np.abs(state.w.coeffs[~outside]).max() > 0

    def test_invariants_and_dealias_identity(self, grid64):
        state = _random(grid64, k_max=grid64.kmax_dealiased)
        defects = state_invariant_defects(state)
        assert max(defects.values()) < 1e-15
        assert np.array_equal(dealias(state.w).coeffs, state.w.coeffs)
        assert np.array_equal(dealias(state.a).coeffs, state.a.coeffs)

    def test_unknown_generator(self, grid64):
        with pytest.raises(ParameterDomainError, match="generator"):
            _random(grid64, rng="mt19937")

    def test_negative_target(self, grid64):
        with pytest.raises(ParameterDomainError, match="targets"):
            _random(grid64, target_h3_v=-1.0)

    def test_k_max_beyond_dealiased_band(self, grid64):
        with pytest.raises(PreconditionError, match="k_max=22"):
            _random(grid64, k_max=22)

    def test_k_max_at_third_of_n_rejected(self):
        with pytest.raises(PreconditionError, match="k_max=16"):
            _random(SpectralGrid(48), k_max=16)

    def test_k_min_below_one(self, grid64):
        with pytest.raises(PreconditionError, match="k_min"):
            _random(grid64, k_min=0)

    def test_empty_annulus(self, grid64):
        with pytest.raises(PreconditionError, match="empty annulus"):
            _random(grid64, k_min=3, k_max=2)


class TestBuildInitialState:
    def test_dispatch_random(self):
        config = RunConfig(n=32, ic="random", seed=4, k_max=6, target_h3_v=2.0, target_h3_b=3.0)
        state = build_initial_state(config)
        expected = random_band_limited(SpectralGrid(32), seed=4, k_min=1, k_max=6, spectrum_slope=-2.0,
                                       target_h3_v=2.0, target_h3_b=3.0)
        assert np.array_equal(state.w.coeffs, expected.w.coeffs)

    @pytest.mark.parametrize("ic, factory", [
        ("orszag_tang", orszag_tang),
        ("single_mode", single_mode),
        ("zero", zero_state),
    ])
    def test_dispatch_named(self, ic, factory):
        config = RunConfig(n=16, ic=ic, amplitude_w=1.0, amplitude_a=1.0)
        state = build_initial_state(config)
        reference = factory(SpectralGrid(16)) if ic == "zero" else factory(SpectralGrid(16), 1.0, 1.0)
        assert np.array_equal(state.w.coeffs, reference.w.coeffs)
        assert np.array_equal(state.a.coeffs, reference.a.coeffs)
