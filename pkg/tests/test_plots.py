"""Tests for src/plots.py: figure construction and HTML output."""

import pandas as pd
import plotly.graph_objects as go
import pytest

from src.diagnostics import compute_record, records_to_frame
from src.initial_conditions import orszag_tang
from src.integrator import IntegratorConfig, integrate
from src.model import PhysicalParams
from src.plots import (
    DEFAULT_NORMS,
    VERDICT_COLORS,
    build_energy_budget_figure,
    build_norm_history_figure,
    build_sweep_figure,
    write_figures,
    write_sweep_figure,
)
from src.spectral import SpectralGrid


@pytest.fixture(scope="module")
def frame():
    params = PhysicalParams()
    history = []
    integrate(
        orszag_tang(SpectralGrid(16)),
        params,
        IntegratorConfig(t_end=0.03),
        lambda state: history.append(compute_record(state, params, history[-1] if history else None)),
    )
    return records_to_frame(history)


@pytest.fixture
def summary():
    return pd.DataFrame({
        "r1": [0.25, 0.5, 0.75],
        "sup_Lam_3_v": [3.0, 4.0, 5.0],
        "sup_Lam_3_b": [2.0, 2.5, 3.5],
        "verdict": ["BOUNDED", "SUSPECT-GROWTH", "FAILED"],
    })


class TestNormHistoryFigure:
    def test_one_trace_per_norm(self, frame):
        fig = build_norm_history_figure(frame)
        assert isinstance(fig, go.Figure)
        assert [trace.name for trace in fig.data] == list(DEFAULT_NORMS)
        assert fig.layout.yaxis.type == "log"

    def test_unknown_norms_skipped(self, frame):
        fig = build_norm_history_figure(frame, norms=["Lam_3_v", "not_a_column"])
        assert [trace.name for trace in fig.data] == ["Lam_3_v"]


class TestEnergyBudgetFigure:
    def test_traces(self, frame):
        fig = build_energy_budget_figure(frame)
        assert [trace.name for trace in fig.data] == ["energy_alpha", "diss_u", "diss_b", "energy_residual"]
        assert len(fig.data[3].x) == len(frame) - 1


class TestSweepFigure:
    def test_markers_colored_by_verdict(self, summary):
        fig = build_sweep_figure(summary)
        colors = list(fig.data[0].marker.color)
        assert colors == [VERDICT_COLORS["BOUNDED"], VERDICT_COLORS["SUSPECT-GROWTH"], VERDICT_COLORS["FAILED"]]


class TestHtmlOutput:
    def test_write_figures(self, frame, tmp_path):
        path = write_figures(frame, tmp_path / "diagnostics.html")
        html = path.read_text(encoding="utf-8")
        assert html.startswith("<html>")
        assert html.count("Plotly.newPlot") == 2

    def test_write_sweep_figure(self, summary, tmp_path):
        path = write_sweep_figure(summary, tmp_path / "sweep_summary.html")
        assert "Plotly.newPlot" in path.read_text(encoding="utf-8")
