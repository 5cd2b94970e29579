"""Batch figure rendering for the crawling-cell solver's CSV outputs.

Consumes only the CSV columns; no physics is recomputed here.
"""

from .render import (BadColumns, FiggenError, MissingFile, MixedKon,
                     render_field_heatmap, render_sweep_surface)

__version__ = "0.1.0"

__all__ = ["BadColumns", "FiggenError", "MissingFile", "MixedKon",
           "render_field_heatmap", "render_sweep_surface"]
