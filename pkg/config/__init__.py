"""Bounds, defaults and colours."""
