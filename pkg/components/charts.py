"""Plotly figures for the dashboard tabs."""

import numpy as np
import pandas as pd
import plotly.express as px
import plotly.graph_objects as go

from config.colors import COLOR_SCHEME, STATUS_COLORS

PALETTE = [COLOR_SCHEME["dark_blue"], COLOR_SCHEME["gold"], "#4169e1", "#FF6B6B", "#00D9FF", "#8e44ad"]


def status_bar(summary: pd.DataFrame) -> go.Figure:
    """Stacked PASS / FAIL / INCONCLUSIVE counts per suite, from status_summary."""
    fig = go.Figure()
    for status, color in STATUS_COLORS.items():
        if status in summary.columns:
            fig.add_trace(go.Bar(name=status, x=summary["suite"], y=summary[status], marker_color=color))
    fig.update_layout(barmode="stack", height=400, showlegend=True, yaxis_title="checks")
    return fig


def hom_count_heatmap(counts: pd.DataFrame, variant: str) -> go.Figure:
    """log10 of |hom(m, n)|; cells past the enumeration cap are left blank."""
    shown = np.log10(counts.where(counts > 0).astype(float))
    fig = px.imshow(
        shown,
        text_auto=".1f",
        color_continuous_scale=[[0, "#f0f4f8"], [1, COLOR_SCHEME["dark_blue"]]],
        labels=dict(x="n", y="m", color="log10 maps"),
        aspect="auto",
    )
    fig.update_layout(height=400, title=f"|{variant}(m, n)|")
    return fig


def refutation_pie(frame: pd.DataFrame) -> go.Figure:
    fig = go.Figure(data=[go.Pie(
        labels=frame["kind"],
        values=frame["candidates"],
        marker=dict(colors=PALETTE),
        textinfo="label+percent",
        hoverinfo="label+value+percent",
        textposition="inside",
    )])
    fig.update_layout(height=450, showlegend=True)
    return fig


def code_growth(frame: pd.DataFrame) -> go.Figure:
    fig = go.Figure(data=[go.Scatter(
        x=frame["size"],
        y=frame["codes up to size"],
        mode="lines+markers",
        line=dict(color=COLOR_SCHEME["dark_blue"], width=3),
        marker=dict(color=COLOR_SCHEME["gold"], size=10),
    )])
    fig.update_layout(height=400, yaxis_type="log", xaxis_title="leaves", yaxis_title="codes")
    return fig
