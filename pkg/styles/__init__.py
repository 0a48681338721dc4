"""Page styling for the dashboard."""
