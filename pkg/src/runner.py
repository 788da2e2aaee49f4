"""Single simulation runs: integrate, monitor, write artifacts, map the verdict to an exit code."""

from __future__ import annotations

import logging
import math
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.config import RunConfig
from src.diagnostics import DiagnosticsRecord, compute_record, energy_spectrum
from src.export import (
    frame_to_csv,
    run_summary_to_json,
    write_diagnostics_csv,
    write_snapshot,
    write_verdict,
)
from src.health import SEVERITY_ICONS, SUSPECT_GROWTH, RegularityReport, regularity_monitor
from src.initial_conditions import build_initial_state
from src.integrator import BlowupError, integrate
from src.model import MhdAlphaState, PhysicalParams, derived_fields, state_invariant_defects
from src.spectral import ScalarField, divergence_defect

logger = logging.getLogger(__name__)

OUT_DIR_ENV = "MHDA_OUT_DIR"
INVARIANT_TOLERANCE = 1e-10


@dataclass
class RunOutcome:
    """Result of one run. ``history`` holds every observed record."""
    config: RunConfig
    report: RegularityReport
    history: List[DiagnosticsRecord]
    final_state: MhdAlphaState
    out_dir: Path
    wall_time: float

    @property
    def exit_code(self) -> int:
        return self.report.exit_code


def resolve_output_root(config: RunConfig, out_root: Optional[Path] = None) -> Path:
    """Explicit argument, then $MHDA_OUT_DIR, then ``config.out_dir``."""
    if out_root is not None:
        return Path(out_root)
    return Path(os.environ.get(OUT_DIR_ENV) or config.out_dir)


def _is_finite(state: MhdAlphaState) -> bool:
    return bool(np.isfinite(state.w.coeffs).all() and np.isfinite(state.a.coeffs).all())


# ── Execution ─────────────────────────────────────────────────────────────────

def execute_run(config: RunConfig, out_dir: Path) -> RunOutcome:
    """Integrate ``config`` and write all artifacts into ``out_dir``."""
    started = time.perf_counter()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    params = config.physical_params
    state0 = build_initial_state(config)
    history: List[DiagnosticsRecord] = []
    observed = 0

    def observe(state: MhdAlphaState) -> None:
        nonlocal observed
        history.append(compute_record(state, params, history[-1] if history else None))
        if config.write_snapshots and config.snapshot_every and observed % config.snapshot_every == 0:
            write_snapshot(state, out_dir)
        observed += 1

    logger.info("run r1=%g r2=%g ic=%s n=%d -> %s", config.r1, config.r2, config.ic, config.n, out_dir)
    aborted, abort_reason = False, None
    try:
        final_state = integrate(state0, params, config.integrator_config, observer=observe)
    except BlowupError as err:
        logger.warning("%s", err)
        aborted, abort_reason = True, err.reason
        final_state = err.state
        if _is_finite(final_state) and final_state.t > history[-1].t:
            observe(final_state)

    report = regularity_monitor(
        history,
        params,
        ceiling=config.h3_ceiling,
        growth_threshold=config.growth_exponent_threshold,
        aborted=aborted,
        abort_reason=abort_reason,
    )
    if report.verdict == SUSPECT_GROWTH:
        suspect = [s.label for s in report.norms if s.verdict == SUSPECT_GROWTH]
        logger.warning("suspect growth in %s", ", ".join(suspect))

    write_diagnostics_csv(history, out_dir / "diagnostics.csv")
    write_verdict(report, out_dir / "verdict.txt")
    if _is_finite(final_state):
        frame_to_csv(energy_spectrum(final_state, params), out_dir / "spectrum.csv")
    if config.write_snapshots:
        write_snapshot(final_state, out_dir)

    wall_time = time.perf_counter() - started
    (out_dir / "summary.json").write_text(
        run_summary_to_json(config.to_dict(), report, wall_time), encoding="utf-8"
    )
    return RunOutcome(config, report, history, final_state, out_dir, wall_time)


def print_run_summary(outcome: RunOutcome) -> None:
    config, report = outcome.config, outcome.report
    print("=" * 60)
    print("  MHD-ALPHA RUN SUMMARY")
    print("=" * 60)
    print(f"  nu, eta, alpha:          {config.nu:g}, {config.eta:g}, {config.alpha:g}")
    print(f"  r1, r2:                  {config.r1:g}, {config.r2:g}"
          f"{'  (critical line)' if report.critical_line else ''}")
    print(f"  grid:                    {config.n} x {config.n}, L = {config.length:.6g}")
    print(f"  scheme:                  {config.scheme}, t_end = {config.t_end:g}")
    print(f"  initial condition:       {config.ic}")
    print("-" * 60)
    for label in ("Lam_3_v", "Lam_3_b"):
        summary = report.norm(label)
        print(f"  sup {label:<20s}{summary.sup:>14.6e}   growth t^{summary.growth_exponent:.2f}")
    for name, value in report.integrals.items():
        print(f"  {name:<24s}{value:>14.6e}")
    print(f"  records:                 {report.records}  (t_final = {report.t_final:.6g})")
    print(f"  wall time:               {outcome.wall_time:.2f} s")
    print("-" * 60)
    if report.flags:
        print("  FLAGS:")
        for flag in report.flags:
            print(f"  [{SEVERITY_ICONS[flag.severity]}] {flag.severity.upper()}: {flag.message}")
    print(f"  VERDICT: {report.verdict}  (exit {report.exit_code})")
    print(f"  output:  {outcome.out_dir}")
    print("=" * 60)


def run(config: RunConfig, out_root: Optional[Path] = None, quiet: bool = False) -> int:
    """Run one simulation into the output root and return its exit code (0/2/3)."""
    outcome = execute_run(config, resolve_output_root(config, out_root))
    if not quiet:
        print_run_summary(outcome)
    return outcome.exit_code


# ── Snapshot checks ───────────────────────────────────────────────────────────

def _without_mean(f: ScalarField) -> ScalarField:
    coeffs = f.coeffs.copy()
    coeffs[0, 0] = 0.0
    return ScalarField(f.grid, coeffs)


def invariant_check(
    state: MhdAlphaState,
    params: Optional[PhysicalParams] = None,
    tolerance: float = INVARIANT_TOLERANCE,
) -> Tuple[bool, Dict[str, float]]:
    """Invariant defects of ``state``, scaled by its largest coefficient.

    Returns (all within ``tolerance``, defects). A non-finite state fails.
    """
    params = params or PhysicalParams()
    defects = state_invariant_defects(state)
    if defects["nonfinite"]:
        return False, defects

    # Mean modes are already in the defects; drop them so Biot–Savart accepts the state
    centered = MhdAlphaState(t=state.t, w=_without_mean(state.w), a=_without_mean(state.a))
    fields = derived_fields(centered, params)
    defects["div_v"] = divergence_defect(fields.v)
    defects["div_u"] = divergence_defect(fields.u)
    defects["div_b"] = divergence_defect(fields.b)

    scale = max(1.0, float(np.abs(state.w.coeffs).max()), float(np.abs(state.a.coeffs).max()))
    ok = all(math.isfinite(v) and v <= tolerance * scale for v in defects.values())
    return ok, defects
