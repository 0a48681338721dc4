"""Plotly charts for the dashboard."""
