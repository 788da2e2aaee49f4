"""Tests for src/health.py: growth exponents, verdicts, flags and the report."""

import math

import numpy as np
import pytest

from src.diagnostics import DiagnosticsRecord
from src.health import (
    BLOWUP,
    BOUNDED,
    SUSPECT_GROWTH,
    HealthFlag,
    format_report,
    growth_exponent,
    regularity_monitor,
    sort_flags,
)
from src.model import PhysicalParams


def make_history(norm_of_t, times=None, integrals=None):
    """Synthetic records carrying a single monitored norm ``Lam_3_v``."""
    times = np.linspace(0.0, 10.0, 41) if times is None else times
    return [
        DiagnosticsRecord(
            t=float(t),
            energy_alpha=1.0,
            diss_u=0.0,
            diss_b=0.0,
            sobolev={"Lam_3_v": float(norm_of_t(t))},
            cumulative_integrals=dict(integrals or {"int_Lam3pr1_v_sq": float(t)}),
        )
        for t in times
    ]


# ── Growth exponent ───────────────────────────────────────────────────────────

class TestGrowthExponent:
    @pytest.mark.parametrize("power", [0.0, 1.0, 2.0, 3.5])
    def test_power_law_slope(self, power):
        times = np.linspace(0.1, 20.0, 200)
        assert growth_exponent(times, times ** power) == pytest.approx(power, abs=1e-10)

    def test_constant_is_zero(self):
        assert growth_exponent([0.0, 1.0, 2.0, 3.0], [5.0] * 4) == pytest.approx(0.0, abs=1e-12)

    def test_decay_is_negative(self):
        times = np.linspace(0.0, 5.0, 50)
        assert growth_exponent(times, np.exp(-times)) < 0

    def test_only_last_quartile_counts(self):
        times = np.linspace(1.0, 100.0, 400)
        values = np.where(times < 70.0, times ** 4, 70.0 ** 4)
        assert growth_exponent(times, values) == pytest.approx(0.0, abs=1e-12)

    def test_short_history_keeps_two_records(self):
        exponent = growth_exponent([0.25, 0.5, 0.75, 1.0], [1.0, 2.0, 4.0, 8.0])
        assert exponent == pytest.approx(math.log(2.0) / math.log(4.0 / 3.0))

    @pytest.mark.parametrize("times, values", [
        ([], []),
        ([1.0], [1.0]),
        ([0.0, 0.0], [1.0, 2.0]),
        ([1.0, 2.0], [0.0, 0.0]),
    ])
    def test_degenerate_inputs_give_zero(self, times, values):
        assert growth_exponent(times, values) == 0.0


# ── Monitor ───────────────────────────────────────────────────────────────────

class TestRegularityMonitor:
    def test_empty_history_raises(self):
        with pytest.raises(ValueError, match="non-empty"):
            regularity_monitor([], PhysicalParams())

    def test_bounded_norm(self):
        report = regularity_monitor(make_history(lambda t: 2.0 + math.sin(t)), PhysicalParams())
        assert report.verdict == BOUNDED
        assert report.exit_code == 0
        summary = report.norm("Lam_3_v")
        assert summary.sup == pytest.approx(3.0, abs=1e-2)
        assert summary.final == pytest.approx(2.0 + math.sin(10.0))
        assert summary.verdict == BOUNDED

    def test_fast_growth_is_suspect(self):
        report = regularity_monitor(make_history(lambda t: 1.0 + t ** 3), PhysicalParams())
        assert report.verdict == SUSPECT_GROWTH
        assert report.exit_code == 2
        assert report.norm("Lam_3_v").growth_exponent > 1.5

    @pytest.mark.parametrize("records", [4, 5, 8, 40])
    def test_doubling_per_record_is_suspect(self, records):
        times = np.arange(1, records + 1) / records
        history = make_history(lambda t: 2.0 ** (t * records), times=times)
        assert regularity_monitor(history, PhysicalParams()).verdict == SUSPECT_GROWTH

    def test_slow_growth_below_threshold(self):
        report = regularity_monitor(make_history(lambda t: 1.0 + t), PhysicalParams())
        assert report.verdict == BOUNDED

    def test_threshold_is_configurable(self):
        history = make_history(lambda t: 1.0 + t)
        assert regularity_monitor(history, PhysicalParams(), growth_threshold=0.5).verdict == SUSPECT_GROWTH

    def test_ceiling_crossing_is_suspect(self):
        report = regularity_monitor(make_history(lambda t: 50.0), PhysicalParams(), ceiling=10.0)
        assert report.verdict == SUSPECT_GROWTH

    def test_nonfinite_sup_is_suspect(self):
        report = regularity_monitor(make_history(lambda t: math.inf if t > 9 else 1.0), PhysicalParams())
        assert report.verdict == SUSPECT_GROWTH

    def test_aborted_is_blowup(self):
        report = regularity_monitor(
            make_history(lambda t: 1.0), PhysicalParams(), aborted=True, abort_reason="dt below dt_min",
        )
        assert report.verdict == BLOWUP
        assert report.exit_code == 3
        assert report.flags[0].severity == "critical"
        assert "dt below dt_min" in report.flags[0].message

    def test_integral_of_square(self):
        report = regularity_monitor(make_history(lambda t: 2.0), PhysicalParams())
        assert report.norm("Lam_3_v").integral_sq == pytest.approx(40.0)

    def test_integrals_from_last_record(self):
        report = regularity_monitor(make_history(lambda t: 1.0), PhysicalParams())
        assert report.integrals == {"int_Lam3pr1_v_sq": 10.0}
        assert report.records == 41 and report.t_final == 10.0

    def test_single_record(self):
        report = regularity_monitor(make_history(lambda t: 1.0, times=[0.0]), PhysicalParams())
        assert report.verdict == BOUNDED
        assert report.norm("Lam_3_v").integral_sq == 0.0

    def test_unknown_norm_label(self):
        report = regularity_monitor(make_history(lambda t: 1.0), PhysicalParams())
        with pytest.raises(KeyError):
            report.norm("Lam_9_q")


# ── Flags ─────────────────────────────────────────────────────────────────────

class TestFlags:
    def test_sort_order(self):
        flags = [
            HealthFlag("positive", "p"),
            HealthFlag("watch", "w"),
            HealthFlag("critical", "c"),
            HealthFlag("warning", "x"),
        ]
        assert [f.severity for f in sort_flags(flags)] == ["critical", "warning", "watch", "positive"]

    def test_positive_flag_on_critical_line(self):
        report = regularity_monitor(make_history(lambda t: 1.0), PhysicalParams(r1=0.5, r2=0.5))
        assert [f.severity for f in report.flags] == ["positive"]

    def test_no_positive_flag_off_critical_line(self):
        report = regularity_monitor(make_history(lambda t: 1.0), PhysicalParams(r1=0.3, r2=0.3))
        assert report.flags == []

    def test_watch_flag_near_ceiling(self):
        report = regularity_monitor(make_history(lambda t: 5.0), PhysicalParams(r1=0.3, r2=0.3), ceiling=100.0)
        assert [f.severity for f in report.flags] == ["watch"]

    def test_growth_warning_message(self):
        report = regularity_monitor(make_history(lambda t: 1.0 + t ** 3), PhysicalParams())
        assert report.flags[0].severity == "warning"
        assert "Lam_3_v grows like" in report.flags[0].message


# ── Report text ───────────────────────────────────────────────────────────────

class TestFormatReport:
    def test_contains_verdict_and_norms(self):
        text = format_report(regularity_monitor(make_history(lambda t: 1.0), PhysicalParams()))
        assert "REGULARITY VERDICT: BOUNDED" in text
        assert "Lam_3_v" in text
        assert "int_Lam3pr1_v_sq" in text
        assert "critical line: yes" in text
        assert text.endswith("\n")

    def test_flags_rendered_with_icons(self):
        report = regularity_monitor(make_history(lambda t: 1.0), PhysicalParams(), aborted=True, abort_reason="boom")
        text = format_report(report)
        assert "[!!!] CRITICAL:" in text

    def test_no_flags_line(self):
        text = format_report(regularity_monitor(make_history(lambda t: 1.0), PhysicalParams(r1=0.3, r2=0.3)))
        assert "No flags." in text
