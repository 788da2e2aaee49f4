"""Offline Plotly figures for diagnostics histories and sweep summaries."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

import pandas as pd
import plotly.graph_objects as go
from plotly.subplots import make_subplots

logger = logging.getLogger(__name__)


# ── Colors ────────────────────────────────────────────────────────────────────

GREEN = "#10B981"
RED = "#EF4444"
BLUE = "#3B82F6"
AMBER = "#F59E0B"
PLOTLY_TEMPLATE = "plotly_white"

VERDICT_COLORS = {"BOUNDED": GREEN, "SUSPECT-GROWTH": AMBER, "BLOWUP": RED, "FAILED": "#6B7280"}

DEFAULT_NORMS: Sequence[str] = ("Lam_3_v", "Lam_3_b", "w_L2", "w_max", "Lam_1pr1_b", "Lam_2pr2_b")


def build_norm_history_figure(
    frame: pd.DataFrame,
    norms: Sequence[str] = DEFAULT_NORMS,
    title: str = "Monitored norms",
    height: int = 480,
) -> go.Figure:
    """Log-scale time series of the selected norm columns."""
    fig = go.Figure()
    for label in norms:
        if label not in frame.columns:
            continue
        fig.add_trace(go.Scatter(x=frame["t"], y=frame[label], mode="lines", name=label))
    fig.update_layout(
        title=title,
        template=PLOTLY_TEMPLATE,
        height=height,
        xaxis_title="t",
        yaxis_title="norm",
        yaxis_type="log",
    )
    return fig


def build_energy_budget_figure(frame: pd.DataFrame, title: str = "Energy budget", height: int = 520) -> go.Figure:
    """α-energy and dissipation on top, per-record energy residual below."""
    fig = make_subplots(rows=2, cols=1, shared_xaxes=True, vertical_spacing=0.08)
    fig.add_trace(go.Scatter(x=frame["t"], y=frame["energy_alpha"], name="energy_alpha",
                             line={"color": BLUE}), row=1, col=1)
    fig.add_trace(go.Scatter(x=frame["t"], y=frame["diss_u"], name="diss_u",
                             line={"color": GREEN}), row=1, col=1)
    fig.add_trace(go.Scatter(x=frame["t"], y=frame["diss_b"], name="diss_b",
                             line={"color": AMBER}), row=1, col=1)
    residual = frame.iloc[1:]
    fig.add_trace(go.Scatter(x=residual["t"], y=residual["energy_residual"], name="energy_residual",
                             mode="markers", marker={"color": RED, "size": 4}), row=2, col=1)
    fig.update_yaxes(title_text="energy / dissipation", row=1, col=1)
    fig.update_yaxes(title_text="residual", type="log", row=2, col=1)
    fig.update_xaxes(title_text="t", row=2, col=1)
    fig.update_layout(title=title, template=PLOTLY_TEMPLATE, height=height)
    return fig


def build_sweep_figure(summary: pd.DataFrame, title: str = "Sup H3 norms across r1", height: int = 420) -> go.Figure:
    """Sup ‖Λ³v‖ and ‖Λ³b‖ per sweep value, marker colored by verdict."""
    colors = [VERDICT_COLORS.get(v, BLUE) for v in summary["verdict"]]
    fig = go.Figure()
    fig.add_trace(go.Scatter(x=summary["r1"], y=summary["sup_Lam_3_v"], mode="lines+markers",
                             name="sup Lam_3_v", marker={"color": colors, "size": 10, "symbol": "circle"}))
    fig.add_trace(go.Scatter(x=summary["r1"], y=summary["sup_Lam_3_b"], mode="lines+markers",
                             name="sup Lam_3_b", marker={"color": colors, "size": 10, "symbol": "diamond"}))
    fig.update_layout(
        title=title,
        template=PLOTLY_TEMPLATE,
        height=height,
        xaxis_title="r1 (r2 = 1 - r1 + offset)",
        yaxis_type="log",
    )
    return fig


def write_figures(frame: pd.DataFrame, out_path: Path) -> Path:
    """Norm history and energy budget in one HTML file (plotly.js from the CDN)."""
    out_path = Path(out_path)
    norms_html = build_norm_history_figure(frame).to_html(full_html=False, include_plotlyjs="cdn")
    budget_html = build_energy_budget_figure(frame).to_html(full_html=False, include_plotlyjs=False)
    out_path.write_text(
        f"<html><head><meta charset=\"utf-8\"></head><body>\n{norms_html}\n{budget_html}\n</body></html>\n",
        encoding="utf-8",
    )
    logger.info("wrote figures to %s", out_path)
    return out_path


def write_sweep_figure(summary: pd.DataFrame, out_path: Path) -> Path:
    out_path = Path(out_path)
    build_sweep_figure(summary).write_html(str(out_path), include_plotlyjs="cdn")
    logger.info("wrote sweep figure to %s", out_path)
    return out_path
