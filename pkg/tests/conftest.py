"""Shared fixtures: small grids and seeded random band-limited fields."""

import numpy as np
import pytest

from src.spectral import ScalarField, SpectralGrid


def make_random_scalar(grid: SpectralGrid, rng: np.random.Generator, kmax: int) -> ScalarField:
    """Real, zero-mean field with random coefficients on |kx|, |ky| <= kmax."""
    noise = rng.standard_normal((grid.n, grid.n)) + 1j * rng.standard_normal((grid.n, grid.n))
    band = (np.abs(grid.kx) <= kmax) & (np.abs(grid.ky) <= kmax)
    coeffs = np.where(band, noise, 0.0)
    coeffs = 0.5 * (coeffs + np.conj(grid.reflect(coeffs)))
    coeffs[0, 0] = 0.0
    return ScalarField(grid, coeffs)


@pytest.fixture
def grid8():
    return SpectralGrid(8)


@pytest.fixture
def grid16():
    return SpectralGrid(16)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_scalar(rng):
    """Factory: random_scalar(grid, kmax=None) with kmax defaulting to the dealiased band."""
    def factory(grid: SpectralGrid, kmax=None) -> ScalarField:
        return make_random_scalar(grid, rng, grid.kmax_dealiased if kmax is None else kmax)
    return factory
