"""Workbench for the cubical assembly model: cubes, presheaves, composition and realizability."""

__version__ = "1.0.0"
