"""Render multi-panel figures from attitude-observer simulation CSVs.

Consumes only the public CSV schema of the simulation CLI; no in-process
coupling to the observer package.
"""
from .render import PANELS, FigureSpec, SchemaError, SeriesInput, load_series, render

__all__ = ["PANELS", "FigureSpec", "SchemaError", "SeriesInput",
           "load_series", "render"]

__version__ = "0.1.0"
