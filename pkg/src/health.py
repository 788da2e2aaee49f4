"""Regularity verdicts over a diagnostics history (pure Python)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.diagnostics import DiagnosticsRecord
from src.model import PhysicalParams

BOUNDED = "BOUNDED"
SUSPECT_GROWTH = "SUSPECT-GROWTH"
BLOWUP = "BLOWUP"

EXIT_CODES: Dict[str, int] = {BOUNDED: 0, SUSPECT_GROWTH: 2, BLOWUP: 3}

SEVERITY_ICONS: Dict[str, str] = {
    "positive": " + ",
    "critical": "!!!",
    "warning": " ! ",
    "watch": " ~ ",
}

SEVERITY_ORDER = ["critical", "warning", "watch", "positive"]


@dataclass
class HealthFlag:
    """A single diagnostic flag."""
    severity: str   # "critical" | "warning" | "watch" | "positive"
    message: str


@dataclass
class NormSummary:
    label: str
    sup: float
    final: float
    integral_sq: float        # ∫ norm² dt over the history
    growth_exponent: float    # log-log slope over the last quartile
    verdict: str


@dataclass
class RegularityReport:
    verdict: str
    norms: List[NormSummary]
    integrals: Dict[str, float] = field(default_factory=dict)
    flags: List[HealthFlag] = field(default_factory=list)
    aborted: bool = False
    abort_reason: Optional[str] = None
    records: int = 0
    t_final: float = 0.0
    critical_line: bool = False

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def norm(self, label: str) -> NormSummary:
        for summary in self.norms:
            if summary.label == label:
                return summary
        raise KeyError(label)


def sort_flags(flags: List[HealthFlag]) -> List[HealthFlag]:
    """Sort flags by severity: critical first, positive last."""
    order = {s: i for i, s in enumerate(SEVERITY_ORDER)}
    return sorted(flags, key=lambda f: order.get(f.severity, 99))


# ── Growth detection ──────────────────────────────────────────────────────────

def growth_exponent(times: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log(value) against log(t) over the last quartile.

    The window always holds at least the last two records. Points with t ≤ 0
    or value ≤ 0 are skipped; fewer than two usable points give 0.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    start = max(0, min(len(times) - 2, (3 * len(times)) // 4))
    t_window, v_window = times[start:], values[start:]
    usable = (t_window > 0) & (v_window > 0) & np.isfinite(v_window)
    if usable.sum() < 2:
        return 0.0
    log_t = np.log(t_window[usable])
    if np.ptp(log_t) == 0:
        return 0.0
    slope, _ = np.polyfit(log_t, np.log(v_window[usable]), 1)
    return float(slope)


def _time_integral_of_square(times: np.ndarray, values: np.ndarray) -> float:
    if len(times) < 2:
        return 0.0
    squares = values ** 2
    return float(np.sum(0.5 * (squares[1:] + squares[:-1]) * np.diff(times)))


# ── Monitor ───────────────────────────────────────────────────────────────────

def regularity_monitor(
    history: Sequence[DiagnosticsRecord],
    params: PhysicalParams,
    ceiling: float = 1e8,
    growth_threshold: float = 1.5,
    aborted: bool = False,
    abort_reason: Optional[str] = None,
) -> RegularityReport:
    """Summarize every monitored norm and classify the run.

    A norm is BOUNDED when its sup stays below ``ceiling`` and its growth
    exponent over the last quartile does not exceed ``growth_threshold``.
    The threshold is a heuristic, not a theorem.
    """
    if not history:
        raise ValueError("regularity_monitor needs a non-empty history")

    times = np.array([rec.t for rec in history], dtype=float)
    summaries: List[NormSummary] = []
    for label in history[0].sobolev:
        values = np.array([rec.sobolev[label] for rec in history], dtype=float)
        sup = float(np.max(values))
        exponent = growth_exponent(times, values)
        healthy = math.isfinite(sup) and sup < ceiling and exponent <= growth_threshold
        summaries.append(NormSummary(
            label=label,
            sup=sup,
            final=float(values[-1]),
            integral_sq=_time_integral_of_square(times, values),
            growth_exponent=exponent,
            verdict=BOUNDED if healthy else SUSPECT_GROWTH,
        ))

    if aborted:
        verdict = BLOWUP
    elif any(s.verdict == SUSPECT_GROWTH for s in summaries):
        verdict = SUSPECT_GROWTH
    else:
        verdict = BOUNDED

    report = RegularityReport(
        verdict=verdict,
        norms=summaries,
        integrals=dict(history[-1].cumulative_integrals),
        aborted=aborted,
        abort_reason=abort_reason,
        records=len(history),
        t_final=float(times[-1]),
        critical_line=params.critical_line,
    )
    report.flags = regularity_flags(report, ceiling, growth_threshold)
    return report


def regularity_flags(report: RegularityReport, ceiling: float, growth_threshold: float) -> List[HealthFlag]:
    """Severity flags for the report, sorted critical first."""
    flags: List[HealthFlag] = []

    if report.aborted:
        flags.append(HealthFlag("critical", f"Run aborted at t={report.t_final:.6g}: {report.abort_reason}"))

    for s in report.norms:
        if s.verdict != SUSPECT_GROWTH:
            if math.isfinite(s.sup) and s.sup > 1e-2 * ceiling:
                flags.append(HealthFlag("watch", f"{s.label} reached {s.sup:.3e}, above 1% of the ceiling"))
            continue
        if not math.isfinite(s.sup) or s.sup >= ceiling:
            flags.append(HealthFlag("warning", f"{s.label} sup {s.sup:.3e} is at or above the ceiling {ceiling:.3e}"))
        else:
            flags.append(HealthFlag(
                "warning",
                f"{s.label} grows like t^{s.growth_exponent:.2f} over the last quartile (> t^{growth_threshold:g})",
            ))

    if report.verdict == BOUNDED and report.critical_line:
        flags.append(HealthFlag("positive", "All monitored norms bounded on the critical line r1 + r2 = 1"))

    return sort_flags(flags)


def format_report(report: RegularityReport) -> str:
    """Plain-text verdict table written to verdict.txt."""
    lines = [
        "=" * 72,
        f"  REGULARITY VERDICT: {report.verdict}",
        "=" * 72,
        f"  records: {report.records}    t_final: {report.t_final:.6g}    "
        f"critical line: {'yes' if report.critical_line else 'no'}",
        "-" * 72,
        f"  {'norm':<16s}{'sup':>13s}{'final':>13s}{'int sq':>13s}{'growth':>9s}  verdict",
    ]
    for s in report.norms:
        lines.append(
            f"  {s.label:<16s}{s.sup:>13.5e}{s.final:>13.5e}{s.integral_sq:>13.5e}"
            f"{s.growth_exponent:>9.2f}  {s.verdict}"
        )
    if report.integrals:
        lines.append("-" * 72)
        for name, value in report.integrals.items():
            lines.append(f"  {name:<24s}{value:>16.8e}")
    lines.append("-" * 72)
    if report.flags:
        lines.append("  FLAGS:")
        for flag in report.flags:
            lines.append(f"  [{SEVERITY_ICONS[flag.severity]}] {flag.severity.upper()}: {flag.message}")
    else:
        lines.append("  No flags.")
    lines.append("=" * 72)
    return "\n".join(lines) + "\n"
