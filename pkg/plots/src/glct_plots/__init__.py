"""Figure rendering for glctkit experiment CSVs."""

__version__ = "0.1.0"

from .render import KINDS, PlotSpec, SchemaError, render

__all__ = ["KINDS", "PlotSpec", "SchemaError", "render"]
