"""Spectral representation of periodic fields on the torus [0, L)². Pure numpy.

Every linear operator of the MHD-α system (fractional Laplacian, Helmholtz
filter, gradients, curl, Leray projection) is a diagonal multiplier on the
wavenumber lattice. Coefficients are true Fourier amplitudes: the forward
transform divides by n².
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np


# ── Errors ────────────────────────────────────────────────────────────────────

class ParameterDomainError(ValueError):
    """A numeric parameter lies outside the domain of the operator."""


class PreconditionError(ValueError):
    """An input field violates the precondition of the operator."""


# ── Grid ──────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class SpectralGrid:
    """n × n Fourier lattice on the periodic square of side ``length``.

    Arrays are indexed ``[ix, iy]`` in numpy FFT order, so ``kx[i, j]`` is the
    integer wavenumber along x of mode (i, j).
    """
    n: int
    length: float = 2.0 * math.pi
    kx: np.ndarray = field(init=False, repr=False)
    ky: np.ndarray = field(init=False, repr=False)
    dealias_mask: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 8 or self.n % 2:
            raise ParameterDomainError(f"grid size n must be an even integer >= 8, got {self.n}")
        if not self.length > 0:
            raise ParameterDomainError(f"domain length must be positive, got {self.length}")

        k1d = np.fft.fftfreq(self.n, d=1.0 / self.n).astype(np.int64)
        kx, ky = np.meshgrid(k1d, k1d, indexing="ij")
        # 3|k| < n keeps quadratic products alias-free even when 3 divides n
        mask = (3 * np.abs(kx) < self.n) & (3 * np.abs(ky) < self.n)

        object.__setattr__(self, "kx", kx)
        object.__setattr__(self, "ky", ky)
        object.__setattr__(self, "dealias_mask", mask)

        scale = 2.0 * math.pi / self.length
        nyquist = np.abs(kx) == self.n // 2
        object.__setattr__(self, "_kx_phys", scale * kx)
        object.__setattr__(self, "_ky_phys", scale * ky)
        # Derivative symbols drop the unpaired Nyquist mode so i·k·f̂ stays Hermitian
        object.__setattr__(self, "_kx_deriv", np.where(nyquist, 0.0, scale * kx))
        object.__setattr__(self, "_ky_deriv", np.where(np.abs(ky) == self.n // 2, 0.0, scale * ky))
        object.__setattr__(self, "_k_mag", scale * np.sqrt(kx ** 2 + ky ** 2))
        object.__setattr__(self, "_neg_index", (-np.arange(self.n)) % self.n)

    # ── Wavenumber helpers ────────────────────────────────────────────────────

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def k_mag(self) -> np.ndarray:
        """|k| = (2π/L)·√(kx² + ky²)."""
        return self._k_mag

    @property
    def k_squared(self) -> np.ndarray:
        return self._k_mag ** 2

    @property
    def kmax_dealiased(self) -> int:
        """Largest integer wavenumber component kept by the 2/3 rule."""
        return (self.n - 1) // 3

    def k_power(self, s: float) -> np.ndarray:
        """|k|^s with the k = 0 mode set to 0 for s > 0 and 1 for s = 0."""
        if s == 0:
            return np.ones_like(self._k_mag)
        out = np.zeros_like(self._k_mag)
        nonzero = self._k_mag > 0
        out[nonzero] = self._k_mag[nonzero] ** s
        return out

    def derivative_symbols(self) -> Tuple[np.ndarray, np.ndarray]:
        """Physical wavenumbers used for ∂₁, ∂₂ (Nyquist entries zeroed)."""
        return self._kx_deriv, self._ky_deriv

    def reflect(self, coeffs: np.ndarray) -> np.ndarray:
        """Return the array c(−k) for c(k)."""
        return coeffs[np.ix_(self._neg_index, self._neg_index)]

    def same_as(self, other: "SpectralGrid") -> bool:
        return self is other or (self.n == other.n and self.length == other.length)

    def coordinates(self, m: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
        """Physical collocation points (x, y), ``ij`` indexed, on an m × m grid."""
        m = m or self.n
        x1d = np.arange(m) * (self.length / m)
        return np.meshgrid(x1d, x1d, indexing="ij")


# ── Fields ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class ScalarField:
    """Real scalar field held as Fourier coefficients on ``grid``."""
    grid: SpectralGrid
    coeffs: np.ndarray

    def __add__(self, other: "ScalarField") -> "ScalarField":
        _require_same_grid(self.grid, other.grid)
        return ScalarField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        _require_same_grid(self.grid, other.grid)
        return ScalarField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, factor: float) -> "ScalarField":
        return ScalarField(self.grid, self.coeffs * factor)

    __rmul__ = __mul__

    def __neg__(self) -> "ScalarField":
        return ScalarField(self.grid, -self.coeffs)

    @property
    def mean(self) -> complex:
        return self.coeffs[0, 0]

    def physical(self, m: Optional[int] = None) -> np.ndarray:
        return to_physical(self, m)


@dataclass(frozen=True, eq=False)
class VectorField:
    """Real 2D vector field held as per-component Fourier coefficients."""
    grid: SpectralGrid
    x: np.ndarray
    y: np.ndarray

    def __add__(self, other: "VectorField") -> "VectorField":
        _require_same_grid(self.grid, other.grid)
        return VectorField(self.grid, self.x + other.x, self.y + other.y)

    def __sub__(self, other: "VectorField") -> "VectorField":
        _require_same_grid(self.grid, other.grid)
        return VectorField(self.grid, self.x - other.x, self.y - other.y)

    def __mul__(self, factor: float) -> "VectorField":
        return VectorField(self.grid, self.x * factor, self.y * factor)

    __rmul__ = __mul__

    def __neg__(self) -> "VectorField":
        return VectorField(self.grid, -self.x, -self.y)

    def components(self) -> Tuple[ScalarField, ScalarField]:
        return ScalarField(self.grid, self.x), ScalarField(self.grid, self.y)

    def physical(self, m: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
        fx, fy = self.components()
        return to_physical(fx, m), to_physical(fy, m)


Field = Union[ScalarField, VectorField]


def _require_same_grid(a: SpectralGrid, b: SpectralGrid) -> None:
    if not a.same_as(b):
        raise PreconditionError(f"grid mismatch: n={a.n}, L={a.length} vs n={b.n}, L={b.length}")


def coefficient_arrays(f: Field) -> Tuple[np.ndarray, ...]:
    """The coefficient arrays of a scalar (one) or vector (two) field."""
    if isinstance(f, VectorField):
        return f.x, f.y
    return (f.coeffs,)


def zeros(grid: SpectralGrid) -> ScalarField:
    return ScalarField(grid, np.zeros((grid.n, grid.n), dtype=np.complex128))


# ── Transforms ────────────────────────────────────────────────────────────────

def from_physical(grid: SpectralGrid, values: np.ndarray) -> ScalarField:
    """Forward transform of real grid values (coefficients = true amplitudes)."""
    if values.shape != (grid.n, grid.n):
        raise PreconditionError(f"expected shape {(grid.n, grid.n)}, got {values.shape}")
    return ScalarField(grid, np.fft.fft2(values, norm="forward"))


def to_physical(f: ScalarField, m: Optional[int] = None) -> np.ndarray:
    """Evaluate f on the n × n grid, or on an oversampled m × m grid (m ≥ n).

    Oversampling zero-pads the spectrum, which is exact interpolation for
    fields whose Nyquist modes are empty (every dealiased field).
    """
    n = f.grid.n
    if m is None or m == n:
        return np.fft.ifft2(f.coeffs, norm="forward").real
    if m < n or m % 2:
        raise ParameterDomainError(f"oversampled size must be even and >= {n}, got {m}")
    index = f.grid.kx[:, 0] % m
    padded = np.zeros((m, m), dtype=np.complex128)
    padded[np.ix_(index, index)] = f.coeffs
    return np.fft.ifft2(padded, norm="forward").real


def spectral_bandwidth(f: Field) -> int:
    """Largest |kx| or |ky| carrying a nonzero coefficient."""
    grid = f.grid
    occupied = np.zeros((grid.n, grid.n), dtype=bool)
    for c in coefficient_arrays(f):
        occupied |= c != 0
    if not occupied.any():
        return 0
    return int(max(np.abs(grid.kx[occupied]).max(), np.abs(grid.ky[occupied]).max()))


def oversampled_size(f: Field, degree: int) -> int:
    """Even grid size m on which degree-``degree`` products of f integrate exactly."""
    bandwidth = spectral_bandwidth(f)
    m = max(f.grid.n, degree * bandwidth + 1)
    return m + (m % 2)


# ── Linear operators ──────────────────────────────────────────────────────────

def _map_scalar_or_vector(f: Field, multiplier: np.ndarray) -> Field:
    if isinstance(f, VectorField):
        return VectorField(f.grid, f.x * multiplier, f.y * multiplier)
    return ScalarField(f.grid, f.coeffs * multiplier)


def fractional_laplacian(f: Field, s: float) -> Field:
    """Λ^s f, the Fourier multiplier |k|^s (mean mode sent to 0 for s > 0)."""
    if s < 0:
        raise ParameterDomainError(f"fractional Laplacian exponent must be >= 0, got {s}")
    return _map_scalar_or_vector(f, f.grid.k_power(s))


def laplacian(f: Field) -> Field:
    return _map_scalar_or_vector(f, -f.grid.k_squared)


def helmholtz_filter_invert(v: Field, alpha: float) -> Field:
    """u = (1 − α²Δ)⁻¹ v."""
    if not alpha > 0:
        raise ParameterDomainError(f"filter width alpha must be > 0, got {alpha}")
    return _map_scalar_or_vector(v, 1.0 / (1.0 + alpha ** 2 * v.grid.k_squared))


def helmholtz_filter_apply(u: Field, alpha: float) -> Field:
    """v = (1 − α²Δ) u."""
    if not alpha > 0:
        raise ParameterDomainError(f"filter width alpha must be > 0, got {alpha}")
    return _map_scalar_or_vector(u, 1.0 + alpha ** 2 * u.grid.k_squared)


def gradient(f: ScalarField) -> VectorField:
    kx, ky = f.grid.derivative_symbols()
    return VectorField(f.grid, 1j * kx * f.coeffs, 1j * ky * f.coeffs)


def perp_gradient(f: ScalarField) -> VectorField:
    """∇⊥f = (∂₂f, −∂₁f)."""
    kx, ky = f.grid.derivative_symbols()
    return VectorField(f.grid, 1j * ky * f.coeffs, -1j * kx * f.coeffs)


def divergence(f: VectorField) -> ScalarField:
    kx, ky = f.grid.derivative_symbols()
    return ScalarField(f.grid, 1j * kx * f.x + 1j * ky * f.y)


def curl(f: VectorField) -> ScalarField:
    """Scalar curl ∂₁f₂ − ∂₂f₁."""
    kx, ky = f.grid.derivative_symbols()
    return ScalarField(f.grid, 1j * kx * f.y - 1j * ky * f.x)


def _inverse_k_squared(grid: SpectralGrid) -> np.ndarray:
    k2 = grid.k_squared
    out = np.zeros_like(k2)
    out[k2 > 0] = 1.0 / k2[k2 > 0]
    return out


def velocity_from_vorticity(w: ScalarField) -> VectorField:
    """Biot–Savart inversion v = ∇⊥Λ⁻²w, so that ∇×v = w and ∇·v = 0."""
    scale = max(1.0, float(np.abs(w.coeffs).max(initial=0.0)))
    if abs(w.coeffs[0, 0]) > 1e-12 * scale:
        raise PreconditionError(
            f"vorticity must have zero mean on the torus, got mean {w.coeffs[0, 0]:.3e}"
        )
    streamfunction = ScalarField(w.grid, w.coeffs * _inverse_k_squared(w.grid))
    return perp_gradient(streamfunction)


def b_from_potential(a: ScalarField) -> VectorField:
    """Magnetic field b = ∇⊥a (divergence-free by construction)."""
    return perp_gradient(a)


def current_from_potential(a: ScalarField) -> ScalarField:
    """Current density j = ∇×b = −Δa."""
    return ScalarField(a.grid, a.coeffs * a.grid.k_squared)


def leray_project(f: VectorField) -> VectorField:
    """Remove the gradient part: f̂ − k(k·f̂)/|k|², mean mode passed through."""
    kx, ky = f.grid.derivative_symbols()
    k2 = kx ** 2 + ky ** 2
    inv = np.zeros_like(k2)
    inv[k2 > 0] = 1.0 / k2[k2 > 0]
    dot = (kx * f.x + ky * f.y) * inv
    return VectorField(f.grid, f.x - kx * dot, f.y - ky * dot)


def dealias(f: Field) -> Field:
    """Zero every mode outside the 2/3-rule mask.

    A mode survives iff 3|kx| < n and 3|ky| < n, so the largest kept
    wavenumber is (n − 1) // 3 and |k| = n/3 is dropped when 3 divides n.
    """
    return _map_scalar_or_vector(f, f.grid.dealias_mask)


# ── Nonlinear products ────────────────────────────────────────────────────────

def nonlinear_product(f: ScalarField, g: ScalarField) -> ScalarField:
    """Pseudo-spectral product f·g, dealiased."""
    _require_same_grid(f.grid, g.grid)
    product = to_physical(f) * to_physical(g)
    return dealias(from_physical(f.grid, product))


# ── Inner products and invariant checks ───────────────────────────────────────

def inner_product(f: Field, g: Field) -> float:
    """∫ f·g dx over the torus, evaluated by Parseval."""
    _require_same_grid(f.grid, g.grid)
    total = 0.0
    for cf, cg in zip(coefficient_arrays(f), coefficient_arrays(g)):
        total += float(np.sum((np.conj(cf) * cg).real))
    return total * f.grid.length ** 2


def l2_norm(f: Field) -> float:
    return math.sqrt(max(inner_product(f, f), 0.0))


def hermitian_defect(f: Field) -> float:
    """max |c(−k) − conj(c(k))| over all modes and components."""
    return max(
        float(np.abs(f.grid.reflect(c) - np.conj(c)).max())
        for c in coefficient_arrays(f)
    )


def divergence_defect(f: VectorField) -> float:
    """max |k·f̂(k)| over modes."""
    kx, ky = f.grid.derivative_symbols()
    return float(np.abs(kx * f.x + ky * f.y).max())


def aliased_amplitude(f: Field) -> float:
    """Largest coefficient outside the dealiasing mask (0 for dealiased fields)."""
    outside = ~f.grid.dealias_mask
    return max(float(np.abs(c[outside]).max(initial=0.0)) for c in coefficient_arrays(f))
