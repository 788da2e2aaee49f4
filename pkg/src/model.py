"""Right-hand sides of the 2D MHD-α system. Pure numpy, no I/O.

Two equivalent forms are provided:

  * the evolved vorticity–potential form
        ∂t w + (u·∇)w + νΛ^{2r₁}w = (b·∇)j
        ∂t a + (u·∇)a + ηΛ^{2r₂}a = 0
  * the primitive (v, b) form, used only as a cross-check oracle.

with v = ∇⊥Λ⁻²w, u = (1 − α²Δ)⁻¹v, b = ∇⊥a and j = −Δa.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, NamedTuple, Tuple

import numpy as np

from src.spectral import (
    ParameterDomainError,
    ScalarField,
    SpectralGrid,
    VectorField,
    aliased_amplitude,
    b_from_potential,
    curl,
    current_from_potential,
    dealias,
    fractional_laplacian,
    from_physical,
    gradient,
    helmholtz_filter_invert,
    hermitian_defect,
    inner_product,
    l2_norm,
    leray_project,
    perp_gradient,
    to_physical,
    velocity_from_vorticity,
)


# ── Data classes ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class PhysicalParams:
    """Viscosity, diffusivity, filter width and fractional exponents."""
    nu: float = 1.0      # viscosity ν
    eta: float = 1.0     # magnetic diffusivity η
    alpha: float = 1.0   # Helmholtz filter width α
    r1: float = 0.5      # dissipation exponent, νΛ^{2r₁}
    r2: float = 0.5      # diffusion exponent, ηΛ^{2r₂}

    def __post_init__(self) -> None:
        if self.nu < 0 or self.eta < 0:
            raise ParameterDomainError(f"nu and eta must be >= 0, got nu={self.nu}, eta={self.eta}")
        if not self.alpha > 0:
            raise ParameterDomainError(f"alpha must be > 0, got {self.alpha}")
        for name in ("r1", "r2"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ParameterDomainError(f"{name} must lie in [0, 1], got {value}")

    @property
    def critical_line(self) -> bool:
        """True on the global-regularity line r₁ + r₂ = 1."""
        return abs(self.r1 + self.r2 - 1.0) < 1e-12

    @property
    def gamma(self) -> float:
        """Fixed exponent of the ‖Λ^γ b‖ monitor, midpoint of (1 − r₂, 1)."""
        return 1.0 - self.r2 / 2.0


@dataclass(frozen=True)
class MhdAlphaState:
    """Evolved pair: vorticity w = ∇×v and magnetic potential a (b = ∇⊥a)."""
    t: float
    w: ScalarField
    a: ScalarField

    @property
    def grid(self) -> SpectralGrid:
        return self.w.grid

    def with_time(self, t: float) -> "MhdAlphaState":
        return replace(self, t=t)


class DerivedFields(NamedTuple):
    v: VectorField   # unfiltered velocity
    u: VectorField   # filtered (advecting) velocity
    b: VectorField   # magnetic field
    j: ScalarField   # current density


# ── Derived fields ────────────────────────────────────────────────────────────

def derived_fields(state: MhdAlphaState, params: PhysicalParams) -> DerivedFields:
    """Reconstruct v, u, b and j from the evolved (w, a)."""
    v = velocity_from_vorticity(state.w)
    u = helmholtz_filter_invert(v, params.alpha)
    b = b_from_potential(state.a)
    j = current_from_potential(state.a)
    return DerivedFields(v=v, u=u, b=b, j=j)


def state_invariant_defects(state: MhdAlphaState) -> Dict[str, float]:
    """Measured departures from the state invariants (all 0 for a valid state)."""
    finite = np.isfinite(state.w.coeffs).all() and np.isfinite(state.a.coeffs).all()
    return {
        "nonfinite": 0.0 if finite else 1.0,
        "mean_w": float(abs(state.w.mean)),
        "mean_a": float(abs(state.a.mean)),
        "hermitian_w": hermitian_defect(state.w),
        "hermitian_a": hermitian_defect(state.a),
        "aliased_w": aliased_amplitude(state.w),
        "aliased_a": aliased_amplitude(state.a),
    }


# ── Vorticity–potential right-hand side ───────────────────────────────────────

def _zero_mean(coeffs: np.ndarray) -> np.ndarray:
    out = coeffs.copy()
    out[0, 0] = 0.0
    return out


def _dealiased_from_physical(grid: SpectralGrid, values: np.ndarray) -> np.ndarray:
    return _zero_mean(dealias(from_physical(grid, values)).coeffs)


def nonlinear_rhs(state: MhdAlphaState, params: PhysicalParams) -> Tuple[ScalarField, ScalarField]:
    """Advection and Lorentz terms only: (−(u·∇)w + (b·∇)j, −(u·∇)a)."""
    grid = state.grid
    fields = derived_fields(state, params)
    ux, uy = fields.u.physical()
    bx, by = fields.b.physical()
    wx, wy = gradient(state.w).physical()
    jx, jy = gradient(fields.j).physical()
    # ∇a = (−b₂, b₁)
    u_dot_grad_a = -ux * by + uy * bx

    dw = _dealiased_from_physical(grid, -(ux * wx + uy * wy) + (bx * jx + by * jy))
    da = _dealiased_from_physical(grid, -u_dot_grad_a)
    return ScalarField(grid, dw), ScalarField(grid, da)


def linear_rhs(state: MhdAlphaState, params: PhysicalParams) -> Tuple[ScalarField, ScalarField]:
    """Dissipative terms (−νΛ^{2r₁}w, −ηΛ^{2r₂}a)."""
    dw = fractional_laplacian(state.w, 2.0 * params.r1) * (-params.nu)
    da = fractional_laplacian(state.a, 2.0 * params.r2) * (-params.eta)
    return dw, da


def rhs_vorticity(state: MhdAlphaState, params: PhysicalParams) -> Tuple[ScalarField, ScalarField]:
    """Full tendencies (∂t w, ∂t a) of the evolved variables."""
    nl_w, nl_a = nonlinear_rhs(state, params)
    lin_w, lin_a = linear_rhs(state, params)
    return nl_w + lin_w, nl_a + lin_a


def lorentz_torque(state: MhdAlphaState, params: PhysicalParams) -> ScalarField:
    """(b·∇)j, the only magnetic term in the vorticity equation."""
    fields = derived_fields(state, params)
    bx, by = fields.b.physical()
    jx, jy = gradient(fields.j).physical()
    return ScalarField(state.grid, _dealiased_from_physical(state.grid, bx * jx + by * jy))


def camassa_holm_reduction(state: MhdAlphaState, params: PhysicalParams) -> ScalarField:
    """Lorentz torque of ``state`` with the magnetic potential switched off.

    With a ≡ 0 the system is the viscous Camassa–Holm (NS-α) equation and the
    returned torque is identically zero.
    """
    hydrodynamic = replace(state, a=ScalarField(state.grid, np.zeros_like(state.a.coeffs)))
    return lorentz_torque(hydrodynamic, params)


def advection_skewness(state: MhdAlphaState, params: PhysicalParams) -> float:
    """⟨(u·∇)w, w⟩ relative to ‖(u·∇)w‖‖w‖; vanishes for divergence-free u."""
    fields = derived_fields(state, params)
    ux, uy = fields.u.physical()
    wx, wy = gradient(state.w).physical()
    advection = dealias(from_physical(state.grid, ux * wx + uy * wy))
    scale = l2_norm(advection) * l2_norm(state.w)
    if scale == 0:
        return 0.0
    return abs(inner_product(advection, state.w)) / scale


# ── Primitive-variable right-hand side (oracle) ───────────────────────────────

def _physical_gradient(f: ScalarField) -> Tuple[np.ndarray, np.ndarray]:
    return gradient(f).physical()


def _project(grid: SpectralGrid, fx: np.ndarray, fy: np.ndarray) -> VectorField:
    field = VectorField(grid, from_physical(grid, fx).coeffs, from_physical(grid, fy).coeffs)
    projected = leray_project(dealias(field))
    return VectorField(grid, _zero_mean(projected.x), _zero_mean(projected.y))


def rhs_primitive(state: MhdAlphaState, params: PhysicalParams) -> Tuple[VectorField, VectorField]:
    """Tendencies (∂t v, ∂t b) from the primitive equations, pressure projected out."""
    grid = state.grid
    fields = derived_fields(state, params)
    v_x, v_y = fields.v.components()
    u_x, u_y = fields.u.components()
    b_x, b_y = fields.b.components()

    vx, vy = to_physical(v_x), to_physical(v_y)
    ux, uy = to_physical(u_x), to_physical(u_y)
    bx, by = to_physical(b_x), to_physical(b_y)
    dvx_1, dvx_2 = _physical_gradient(v_x)
    dvy_1, dvy_2 = _physical_gradient(v_y)
    dux_1, dux_2 = _physical_gradient(u_x)
    duy_1, duy_2 = _physical_gradient(u_y)
    dbx_1, dbx_2 = _physical_gradient(b_x)
    dby_1, dby_2 = _physical_gradient(b_y)

    # −(u·∇)v − Σ_k v_k∇u_k + (b·∇)b
    momentum_x = -(ux * dvx_1 + uy * dvx_2) - (vx * dux_1 + vy * duy_1) + (bx * dbx_1 + by * dbx_2)
    momentum_y = -(ux * dvy_1 + uy * dvy_2) - (vx * dux_2 + vy * duy_2) + (bx * dby_1 + by * dby_2)
    # −(u·∇)b + (b·∇)u
    induction_x = -(ux * dbx_1 + uy * dbx_2) + (bx * dux_1 + by * dux_2)
    induction_y = -(ux * dby_1 + uy * dby_2) + (bx * duy_1 + by * duy_2)

    dv = _project(grid, momentum_x, momentum_y) - fractional_laplacian(fields.v, 2.0 * params.r1) * params.nu
    db = _project(grid, induction_x, induction_y) - fractional_laplacian(fields.b, 2.0 * params.r2) * params.eta
    return dv, db


def cross_check_formulations(state: MhdAlphaState, params: PhysicalParams) -> float:
    """Relative discrepancy between the vorticity and primitive tendencies."""
    dw, da = rhs_vorticity(state, params)
    dv, db = rhs_primitive(state, params)

    vorticity_gap = l2_norm(curl(dv) - dw) / max(1.0, l2_norm(dw))
    db_from_potential = perp_gradient(da)
    induction_gap = l2_norm(db - db_from_potential) / max(1.0, l2_norm(db_from_potential))
    return max(vorticity_gap, induction_gap)
