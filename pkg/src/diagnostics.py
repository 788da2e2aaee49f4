"""Energy law, Sobolev-norm monitors and numerically checkable inequalities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.model import MhdAlphaState, PhysicalParams, derived_fields, rhs_vorticity
from src.spectral import (
    Field,
    ParameterDomainError,
    ScalarField,
    SpectralGrid,
    VectorField,
    coefficient_arrays,
    curl,
    fractional_laplacian,
    l2_norm,
    oversampled_size,
    to_physical,
)


# ── Record schema ─────────────────────────────────────────────────────────────

# Fixed CSV column order after the energy columns.
NORM_COLUMNS: List[str] = [
    "L2_u", "H1_u", "L2_b",
    "w_L2", "w_L4", "w_L8", "w_max",
    "Lam_r1_u", "Lam_r2_b",
    "Lam_1pr1_b", "Lam_1pr2_b", "Lam_2pr2_b",
    "Lam_3_b", "Lam_3_v",
]
INTEGRAL_COLUMNS: List[str] = ["int_Lam3pr1_v_sq", "int_Lam3pr2_b_sq"]
CSV_COLUMNS: List[str] = (
    ["t", "energy_alpha", "diss_u", "diss_b", "energy_residual"] + NORM_COLUMNS + INTEGRAL_COLUMNS
)

# Monitored but not part of the CSV.
EXTRA_NORMS: List[str] = ["Lam_r1_grad_u", "Lam_gamma_b", "Lam_r1p2r2_w"]

# cumulative integral label → instantaneous squared-norm label it integrates
_INTEGRANDS: Dict[str, str] = {
    "int_Lam3pr1_v_sq": "Lam_3pr1_v_sq",
    "int_Lam3pr2_b_sq": "Lam_3pr2_b_sq",
    "int_dissipation": "dissipation",
}


@dataclass
class DiagnosticsRecord:
    """Time-stamped energy budget and norm values of one state."""
    t: float
    energy_alpha: float           # ½[‖u‖² + α²‖∇u‖² + ‖b‖²]
    diss_u: float                 # ν[‖Λ^{r₁}u‖² + α²‖Λ^{r₁}∇u‖²]
    diss_b: float                 # η‖Λ^{r₂}b‖²
    sobolev: Dict[str, float] = field(default_factory=dict)
    cumulative_integrals: Dict[str, float] = field(default_factory=dict)
    integrands: Dict[str, float] = field(default_factory=dict)
    energy_residual: float = 0.0
    diss_rate: float = float("nan")   # d/dt (diss_u + diss_b)

    @property
    def dissipation(self) -> float:
        return self.diss_u + self.diss_b

    def row(self) -> Dict[str, float]:
        """Values keyed by CSV column."""
        values = {
            "t": self.t,
            "energy_alpha": self.energy_alpha,
            "diss_u": self.diss_u,
            "diss_b": self.diss_b,
            "energy_residual": self.energy_residual,
        }
        values.update({name: self.sobolev[name] for name in NORM_COLUMNS})
        values.update({name: self.cumulative_integrals[name] for name in INTEGRAL_COLUMNS})
        return values


# ── Norms ─────────────────────────────────────────────────────────────────────

def sobolev_norm(f: Field, s: float) -> float:
    """Homogeneous norm ‖Λ^s f‖_{L²} (plain L² norm at s = 0)."""
    if s < 0:
        raise ParameterDomainError(f"Sobolev exponent must be >= 0, got {s}")
    weight = f.grid.k_power(2.0 * s)
    total = sum(float(np.sum(weight * np.abs(c) ** 2)) for c in coefficient_arrays(f))
    return f.grid.length * math.sqrt(total)


def lp_norm(f: ScalarField, p: int) -> float:
    """‖f‖_{L^p}, exact for even p (evaluated on an oversampled grid)."""
    if p < 1:
        raise ParameterDomainError(f"Lebesgue exponent must be >= 1, got {p}")
    m = oversampled_size(f, int(math.ceil(p)))
    values = to_physical(f, m)
    integral = float(np.sum(np.abs(values) ** p)) * (f.grid.length / m) ** 2
    return integral ** (1.0 / p)


def max_norm(f: ScalarField, oversample: int = 4) -> float:
    """Pointwise max |f| sampled on a grid refined ``oversample`` times per bandwidth."""
    m = oversampled_size(f, oversample)
    return float(np.abs(to_physical(f, m)).max(initial=0.0))


def h3_norms(state: MhdAlphaState) -> Tuple[float, float]:
    """(‖Λ³v‖, ‖Λ³b‖) straight from (w, a): |v̂| = |ŵ|/|k| and |b̂| = |k||â|."""
    return sobolev_norm(state.w, 2.0), sobolev_norm(state.a, 4.0)


# ── Energy law ────────────────────────────────────────────────────────────────

def _dissipation_weights(grid: SpectralGrid, params: PhysicalParams) -> Tuple[np.ndarray, np.ndarray]:
    """Per-mode weights with D = L²Σ (W_w|ŵ|² + W_a|â|²)."""
    k2 = grid.k_squared
    weight_w = np.zeros_like(k2)
    nonzero = k2 > 0
    weight_w[nonzero] = (
        params.nu * grid.k_power(2.0 * params.r1)[nonzero] / k2[nonzero]
        / (1.0 + params.alpha ** 2 * k2[nonzero])
    )
    weight_a = params.eta * grid.k_power(2.0 * params.r2 + 2.0)
    return weight_w, weight_a


def dissipation_rate(state: MhdAlphaState, params: PhysicalParams) -> float:
    """Exact time derivative of diss_u + diss_b along the flow."""
    weight_w, weight_a = _dissipation_weights(state.grid, params)
    dw, da = rhs_vorticity(state, params)
    rate = (
        np.sum(weight_w * (np.conj(state.w.coeffs) * dw.coeffs).real)
        + np.sum(weight_a * (np.conj(state.a.coeffs) * da.coeffs).real)
    )
    return 2.0 * float(rate) * state.grid.length ** 2


def energy_balance_residual(rec_prev: DiagnosticsRecord, rec_next: DiagnosticsRecord) -> float:
    """Relative defect of dE/dt = −(diss_u + diss_b) over [t_prev, t_next].

    The interval-average dissipation is the trapezoid value, corrected by
    Δt/12·(D′_prev − D′_next) when both records carry ``diss_rate``.
    """
    dt = rec_next.t - rec_prev.t
    if not dt > 0:
        raise ValueError(f"records must be time-ordered, got t={rec_prev.t} then t={rec_next.t}")
    mean_dissipation = 0.5 * (rec_prev.dissipation + rec_next.dissipation)
    if math.isfinite(rec_prev.diss_rate) and math.isfinite(rec_next.diss_rate):
        mean_dissipation += dt / 12.0 * (rec_prev.diss_rate - rec_next.diss_rate)
    defect = (rec_next.energy_alpha - rec_prev.energy_alpha) / dt + mean_dissipation
    return abs(defect) / max(1.0, rec_next.energy_alpha)


# ── Records ───────────────────────────────────────────────────────────────────

def compute_record(
    state: MhdAlphaState,
    params: PhysicalParams,
    previous: Optional[DiagnosticsRecord] = None,
) -> DiagnosticsRecord:
    """Evaluate every monitored quantity of ``state``.

    Cumulative integrals advance from ``previous`` by the trapezoid rule.
    """
    fields = derived_fields(state, params)
    u, v, b, w = fields.u, fields.v, fields.b, state.w
    r1, r2 = params.r1, params.r2

    norms = {
        "L2_u": sobolev_norm(u, 0.0),
        "H1_u": sobolev_norm(u, 1.0),
        "L2_b": sobolev_norm(b, 0.0),
        "w_L2": lp_norm(w, 2),
        "w_L4": lp_norm(w, 4),
        "w_L8": lp_norm(w, 8),
        "w_max": max_norm(w),
        "Lam_r1_u": sobolev_norm(u, r1),
        "Lam_r2_b": sobolev_norm(b, r2),
        "Lam_1pr1_b": sobolev_norm(b, 1.0 + r1),
        "Lam_1pr2_b": sobolev_norm(b, 1.0 + r2),
        "Lam_2pr2_b": sobolev_norm(b, 2.0 + r2),
        "Lam_3_b": sobolev_norm(b, 3.0),
        "Lam_3_v": sobolev_norm(v, 3.0),
        "Lam_r1_grad_u": sobolev_norm(u, 1.0 + r1),
        "Lam_gamma_b": sobolev_norm(b, params.gamma),
        "Lam_r1p2r2_w": sobolev_norm(w, r1 + 2.0 * r2),
    }
    alpha2 = params.alpha ** 2
    energy = 0.5 * (norms["L2_u"] ** 2 + alpha2 * norms["H1_u"] ** 2 + norms["L2_b"] ** 2)
    diss_u = params.nu * (norms["Lam_r1_u"] ** 2 + alpha2 * norms["Lam_r1_grad_u"] ** 2)
    diss_b = params.eta * norms["Lam_r2_b"] ** 2

    integrands = {
        "Lam_3pr1_v_sq": sobolev_norm(v, 3.0 + r1) ** 2,
        "Lam_3pr2_b_sq": sobolev_norm(b, 3.0 + r2) ** 2,
        "dissipation": diss_u + diss_b,
    }

    record = DiagnosticsRecord(
        t=state.t,
        energy_alpha=energy,
        diss_u=diss_u,
        diss_b=diss_b,
        sobolev=norms,
        integrands=integrands,
        diss_rate=dissipation_rate(state, params),
    )

    if previous is None:
        record.cumulative_integrals = {name: 0.0 for name in _INTEGRANDS}
    else:
        dt = state.t - previous.t
        record.cumulative_integrals = {
            name: previous.cumulative_integrals[name]
            + 0.5 * dt * (previous.integrands[source] + integrands[source])
            for name, source in _INTEGRANDS.items()
        }
        if dt > 0:
            record.energy_residual = energy_balance_residual(previous, record)
    return record


def records_to_frame(history: Sequence[DiagnosticsRecord]) -> pd.DataFrame:
    """History as a DataFrame in the fixed CSV column order."""
    return pd.DataFrame([rec.row() for rec in history], columns=CSV_COLUMNS)


def energy_spectrum(state: MhdAlphaState, params: PhysicalParams) -> pd.DataFrame:
    """Shell-summed α-energy spectrum E(k), k = nearest integer |k| shell."""
    grid = state.grid
    fields = derived_fields(state, params)
    density = (
        (1.0 + params.alpha ** 2 * grid.k_squared) * (np.abs(fields.u.x) ** 2 + np.abs(fields.u.y) ** 2)
        + np.abs(fields.b.x) ** 2 + np.abs(fields.b.y) ** 2
    ) * 0.5 * grid.length ** 2
    shells = np.rint(np.sqrt(grid.kx ** 2 + grid.ky ** 2)).astype(int)
    energy = np.bincount(shells.ravel(), weights=density.ravel())
    return pd.DataFrame({"k": np.arange(energy.size), "energy": energy})


# ── Inequality checks ─────────────────────────────────────────────────────────

def check_lemma_2_4(f: ScalarField, gamma: float, p: int) -> Tuple[float, float]:
    """Both sides of 2∫|Λ^γ f^{p/2}|² ≤ p∫|f|^{p−2} f Λ^{2γ}f for even p.

    The power f^{p/2} is |f|^{p/2} when 4 divides p and the signed power
    otherwise; both are polynomials, so each side is exact on the
    oversampled grid.

    Returns (lhs, rhs). For p ≡ 2 mod 4 (p = 2, 6, 10, ...) ``lhs`` is
    2‖Λ^γ f^{p/2}‖² with the signed power, not 2‖Λ^γ |f|^{p/2}‖², so the pair
    checks the signed-power form of the inequality. ``rhs`` is the same in
    both forms.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ParameterDomainError(f"gamma must lie in [0, 1], got {gamma}")
    if int(p) != p or p < 2 or p % 2:
        raise ParameterDomainError(f"p must be an even integer >= 2, got {p}")
    p = int(p)

    m = oversampled_size(f, p)
    fine = SpectralGrid(m, f.grid.length)
    values = to_physical(f, m)

    power = ScalarField(fine, np.fft.fft2(values ** (p // 2), norm="forward"))
    lhs = 2.0 * sobolev_norm(power, gamma) ** 2

    smoothed = to_physical(fractional_laplacian(f, 2.0 * gamma), m)
    rhs = p * float(np.sum(values ** (p - 1) * smoothed)) * fine.dx ** 2
    return lhs, rhs


def check_lemma_2_1(f: VectorField) -> Tuple[float, float]:
    """(‖∇f‖, ‖∇×f‖); equal for divergence-free f at p = 2."""
    return sobolev_norm(f, 1.0), l2_norm(curl(f))


def interpolation_defect(f: Field, s: float) -> float:
    """‖Λ^s f‖ − ‖f‖^{1−s/3}‖Λ³f‖^{s/3} for s ∈ [0, 3] (≤ 0 by Hölder)."""
    if not 0.0 <= s <= 3.0:
        raise ParameterDomainError(f"interpolation exponent must lie in [0, 3], got {s}")
    low, high = sobolev_norm(f, 0.0), sobolev_norm(f, 3.0)
    return sobolev_norm(f, s) - low ** (1.0 - s / 3.0) * high ** (s / 3.0)
