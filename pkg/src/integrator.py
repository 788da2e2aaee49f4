"""Integrating-factor Runge–Kutta time stepping with a CFL-controlled step."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from src.diagnostics import h3_norms
from src.model import MhdAlphaState, PhysicalParams, derived_fields, nonlinear_rhs
from src.spectral import ParameterDomainError, ScalarField, SpectralGrid

logger = logging.getLogger(__name__)

SPEED_FLOOR = 1e-12
# A remainder shorter than this fraction of dt is folded into the last step.
LANDING_SLACK = 1e-6

Observer = Callable[[MhdAlphaState], None]


# ── Configuration ─────────────────────────────────────────────────────────────

class Scheme(str, Enum):
    IFRK4 = "IFRK4"   # Lawson classical fourth order
    IFRK3 = "IFRK3"   # Lawson form of Kutta's third order (stage times 0, ½, 1)


@dataclass(frozen=True)
class IntegratorConfig:
    scheme: Scheme = Scheme.IFRK4
    cfl: float = 0.5
    dt_max: float = 1e-2
    dt_min: float = 1e-8          # a CFL step below this aborts the run
    t_end: float = 1.0
    observe_every: int = 1        # observer cadence in steps; the final state is always observed
    h3_ceiling: float = 1e8       # ‖Λ³v‖ or ‖Λ³b‖ above this aborts the run

    def __post_init__(self) -> None:
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if not 0.0 < self.cfl <= 1.0:
            raise ParameterDomainError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not 0.0 < self.dt_min < self.dt_max:
            raise ParameterDomainError(
                f"need 0 < dt_min < dt_max, got dt_min={self.dt_min}, dt_max={self.dt_max}"
            )
        if not self.t_end > 0:
            raise ParameterDomainError(f"t_end must be > 0, got {self.t_end}")
        if self.observe_every < 1:
            raise ParameterDomainError(f"observe_every must be >= 1, got {self.observe_every}")
        if not self.h3_ceiling > 0:
            raise ParameterDomainError(f"h3_ceiling must be > 0, got {self.h3_ceiling}")


class BlowupError(RuntimeError):
    """Integration aborted; ``state`` is the last state reached."""

    def __init__(self, reason: str, state: MhdAlphaState):
        super().__init__(f"blow-up at t={state.t:.6g}: {reason}")
        self.reason = reason
        self.state = state


# ── Single step ───────────────────────────────────────────────────────────────

Coefficients = Tuple[np.ndarray, np.ndarray]


def linear_decay_rates(grid: SpectralGrid, params: PhysicalParams) -> Coefficients:
    """Exact exponents (ν|k|^{2r₁}, η|k|^{2r₂}) of the linear part."""
    return params.nu * grid.k_power(2.0 * params.r1), params.eta * grid.k_power(2.0 * params.r2)


def _nonlinear(grid: SpectralGrid, params: PhysicalParams, t: float, y: Coefficients) -> Coefficients:
    state = MhdAlphaState(t=t, w=ScalarField(grid, y[0]), a=ScalarField(grid, y[1]))
    dw, da = nonlinear_rhs(state, params)
    return dw.coeffs, da.coeffs


def _ifrk4(grid, params, t, y, dt, rates) -> Coefficients:
    full = [np.exp(-c * dt) for c in rates]
    half = [np.exp(-c * dt / 2.0) for c in rates]

    k1 = _nonlinear(grid, params, t, y)
    y2 = tuple(h * (yi + dt / 2.0 * ki) for h, yi, ki in zip(half, y, k1))
    k2 = _nonlinear(grid, params, t + dt / 2.0, y2)
    y3 = tuple(h * yi + dt / 2.0 * ki for h, yi, ki in zip(half, y, k2))
    k3 = _nonlinear(grid, params, t + dt / 2.0, y3)
    y4 = tuple(e * yi + dt * h * ki for e, h, yi, ki in zip(full, half, y, k3))
    k4 = _nonlinear(grid, params, t + dt, y4)

    return tuple(
        e * yi + dt / 6.0 * (e * a + 2.0 * h * (b + c) + d)
        for e, h, yi, a, b, c, d in zip(full, half, y, k1, k2, k3, k4)
    )


def _ifrk3(grid, params, t, y, dt, rates) -> Coefficients:
    full = [np.exp(-c * dt) for c in rates]
    half = [np.exp(-c * dt / 2.0) for c in rates]

    k1 = _nonlinear(grid, params, t, y)
    y2 = tuple(h * (yi + dt / 2.0 * ki) for h, yi, ki in zip(half, y, k1))
    k2 = _nonlinear(grid, params, t + dt / 2.0, y2)
    y3 = tuple(
        e * (yi - dt * a) + 2.0 * dt * h * b
        for e, h, yi, a, b in zip(full, half, y, k1, k2)
    )
    k3 = _nonlinear(grid, params, t + dt, y3)

    return tuple(
        e * yi + dt / 6.0 * (e * a + 4.0 * h * b + c)
        for e, h, yi, a, b, c in zip(full, half, y, k1, k2, k3)
    )


_SCHEMES = {Scheme.IFRK4: _ifrk4, Scheme.IFRK3: _ifrk3}


def step(
    state: MhdAlphaState,
    params: PhysicalParams,
    dt: float,
    scheme: Scheme = Scheme.IFRK4,
) -> MhdAlphaState:
    """Advance by dt: linear terms exactly, nonlinear terms by the RK scheme."""
    if not dt > 0:
        raise ParameterDomainError(f"dt must be > 0, got {dt}")
    grid = state.grid
    rates = linear_decay_rates(grid, params)
    w_new, a_new = _SCHEMES[Scheme(scheme)](grid, params, state.t, (state.w.coeffs, state.a.coeffs), dt, rates)

    if not (np.isfinite(w_new).all() and np.isfinite(a_new).all()):
        raise BlowupError("non-finite coefficients", state)
    return MhdAlphaState(t=state.t + dt, w=ScalarField(grid, w_new), a=ScalarField(grid, a_new))


# ── Step-size control ─────────────────────────────────────────────────────────

def _max_speed(state: MhdAlphaState, params: PhysicalParams) -> float:
    fields = derived_fields(state, params)
    ux, uy = fields.u.physical()
    bx, by = fields.b.physical()
    return max(float(np.hypot(ux, uy).max()), float(np.hypot(bx, by).max()), SPEED_FLOOR)


def _cfl_unclamped(state: MhdAlphaState, params: PhysicalParams, config: IntegratorConfig) -> float:
    return config.cfl * state.grid.dx / _max_speed(state, params)


def cfl_dt(state: MhdAlphaState, params: PhysicalParams, config: IntegratorConfig) -> float:
    """cfl·Δx / max(‖u‖∞, ‖b‖∞), clamped to [dt_min, dt_max]."""
    return float(np.clip(_cfl_unclamped(state, params, config), config.dt_min, config.dt_max))


# ── Driver ────────────────────────────────────────────────────────────────────

def integrate(
    state0: MhdAlphaState,
    params: PhysicalParams,
    config: IntegratorConfig,
    observer: Optional[Observer] = None,
) -> MhdAlphaState:
    """Step from state0 to config.t_end, observing the initial state and every
    ``observe_every``-th step. Raises BlowupError with the last state on abort.
    """
    if observer is not None:
        observer(state0)
    if state0.t >= config.t_end:
        return state0

    logger.info(
        "integrating t=%.6g -> %.6g with %s (n=%d)",
        state0.t, config.t_end, config.scheme.value, state0.grid.n,
    )
    state = state0
    steps = 0
    while state.t < config.t_end:
        dt = _cfl_unclamped(state, params, config)
        if dt < config.dt_min:
            raise BlowupError(f"CFL step {dt:.3e} below dt_min={config.dt_min:.3e}", state)
        dt = min(dt, config.dt_max)
        last = state.t + dt * (1.0 + LANDING_SLACK) >= config.t_end
        if last:
            dt = config.t_end - state.t

        new_state = step(state, params, dt, config.scheme)
        if last:
            new_state = new_state.with_time(config.t_end)
        steps += 1

        h3_v, h3_b = h3_norms(new_state)
        if max(h3_v, h3_b) > config.h3_ceiling:
            raise BlowupError(
                f"H3 norm {max(h3_v, h3_b):.3e} exceeds ceiling {config.h3_ceiling:.3e}", new_state
            )

        state = new_state
        logger.debug("step %d: t=%.6g dt=%.3e |L3 v|=%.4g |L3 b|=%.4g", steps, state.t, dt, h3_v, h3_b)
        if observer is not None and (steps % config.observe_every == 0 or last):
            observer(state)

    logger.info("reached t=%.6g after %d steps", state.t, steps)
    return state
