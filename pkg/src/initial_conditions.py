"""Initial states: Orszag–Tang, single mode, zero, and seeded random band-limited fields."""

from __future__ import annotations

from typing import TYPE_CHECKING, Callable, Dict

import numpy as np

from src.diagnostics import h3_norms
from src.model import MhdAlphaState
from src.spectral import (
    ParameterDomainError,
    PreconditionError,
    ScalarField,
    SpectralGrid,
    zeros,
)

if TYPE_CHECKING:
    from src.config import RunConfig

# Counter-based bit generators, selectable by name for reproducible draws.
RNG_BIT_GENERATORS: Dict[str, Callable[[int], np.random.BitGenerator]] = {
    "philox": np.random.Philox,
}


def _modes(grid: SpectralGrid, amplitudes: Dict[tuple, complex]) -> ScalarField:
    """Field with the given coefficient at each integer mode (kx, ky)."""
    coeffs = np.zeros((grid.n, grid.n), dtype=np.complex128)
    for (kx, ky), value in amplitudes.items():
        coeffs[kx % grid.n, ky % grid.n] += value
    return ScalarField(grid, coeffs)


def zero_state(grid: SpectralGrid) -> MhdAlphaState:
    return MhdAlphaState(t=0.0, w=zeros(grid), a=zeros(grid))


def orszag_tang(grid: SpectralGrid, amplitude_w: float = 1.0, amplitude_a: float = 1.0) -> MhdAlphaState:
    """w = −2A_w(cos x + cos y), a = A_a(cos 2x / 2 + cos y), x measured in units of L/2π."""
    w = _modes(grid, {
        (1, 0): -amplitude_w, (-1, 0): -amplitude_w,
        (0, 1): -amplitude_w, (0, -1): -amplitude_w,
    })
    a = _modes(grid, {
        (2, 0): amplitude_a / 4.0, (-2, 0): amplitude_a / 4.0,
        (0, 1): amplitude_a / 2.0, (0, -1): amplitude_a / 2.0,
    })
    return MhdAlphaState(t=0.0, w=w, a=a)


def single_mode(grid: SpectralGrid, amplitude_w: float = 1.0, amplitude_a: float = 0.0) -> MhdAlphaState:
    """w = A_w cos x, a = A_a cos x. Every nonlinear term vanishes, so the
    solution decays exactly at the linear rates.
    """
    w = _modes(grid, {(1, 0): amplitude_w / 2.0, (-1, 0): amplitude_w / 2.0})
    a = _modes(grid, {(1, 0): amplitude_a / 2.0, (-1, 0): amplitude_a / 2.0})
    return MhdAlphaState(t=0.0, w=w, a=a)


def _random_annulus_field(
    grid: SpectralGrid,
    generator: np.random.Generator,
    annulus: np.ndarray,
    amplitude: np.ndarray,
) -> ScalarField:
    noise = generator.standard_normal((grid.n, grid.n)) + 1j * generator.standard_normal((grid.n, grid.n))
    coeffs = np.where(annulus, amplitude * noise, 0.0)
    coeffs = 0.5 * (coeffs + np.conj(grid.reflect(coeffs)))
    return ScalarField(grid, coeffs)


def random_band_limited(
    grid: SpectralGrid,
    seed: int,
    k_min: int,
    k_max: int,
    spectrum_slope: float,
    target_h3_v: float,
    target_h3_b: float,
    rng: str = "philox",
) -> MhdAlphaState:
    """Gaussian w and a on the annulus k_min ≤ |k| ≤ k_max with amplitudes ∝ |k|^slope,
    rescaled so that ‖Λ³v‖ = target_h3_v and ‖Λ³b‖ = target_h3_b.
    """
    if rng not in RNG_BIT_GENERATORS:
        raise ParameterDomainError(f"unknown generator {rng!r}, expected one of {sorted(RNG_BIT_GENERATORS)}")
    if not 1 <= k_min:
        raise PreconditionError(f"k_min must be >= 1, got {k_min}")
    if k_max > grid.kmax_dealiased:
        raise PreconditionError(
            f"k_max={k_max} exceeds the largest dealiased wavenumber {grid.kmax_dealiased} for n={grid.n}"
        )
    if target_h3_v < 0 or target_h3_b < 0:
        raise ParameterDomainError("H3 targets must be >= 0")

    radius = np.sqrt(grid.kx ** 2 + grid.ky ** 2)
    annulus = (radius >= k_min) & (radius <= k_max)
    if not annulus.any():
        raise PreconditionError(f"empty annulus {k_min} <= |k| <= {k_max}")

    amplitude = np.zeros_like(radius)
    amplitude[annulus] = radius[annulus] ** spectrum_slope

    generator = np.random.Generator(RNG_BIT_GENERATORS[rng](seed))
    w = _random_annulus_field(grid, generator, annulus, amplitude)
    a = _random_annulus_field(grid, generator, annulus, amplitude)

    state = MhdAlphaState(t=0.0, w=w, a=a)
    h3_v, h3_b = h3_norms(state)
    w = w * (target_h3_v / h3_v) if h3_v > 0 else w
    a = a * (target_h3_b / h3_b) if h3_b > 0 else a
    return MhdAlphaState(t=0.0, w=w, a=a)


def build_initial_state(config: RunConfig) -> MhdAlphaState:
    """Initial state selected by ``config.ic``."""
    grid = config.grid
    if config.ic == "orszag_tang":
        return orszag_tang(grid, config.amplitude_w, config.amplitude_a)
    if config.ic == "random":
        return random_band_limited(
            grid,
            seed=config.seed,
            k_min=config.k_min,
            k_max=config.k_max,
            spectrum_slope=config.spectrum_slope,
            target_h3_v=config.target_h3_v,
            target_h3_b=config.target_h3_b,
            rng=config.rng,
        )
    if config.ic == "single_mode":
        return single_mode(grid, config.amplitude_w, config.amplitude_a)
    if config.ic == "zero":
        return zero_state(grid)
    raise ParameterDomainError(f"unknown initial condition {config.ic!r}")
