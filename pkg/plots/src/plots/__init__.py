"""Display-only plotting of schmidt-cert CSV output.

Values are read, never recomputed; every figure embeds a checksum of the
rows it was drawn from.
"""

from .render import CHECKSUM_KEY, render, rows_checksum
from .spec import PlotSpec, SchemaError

__all__ = ["CHECKSUM_KEY", "PlotSpec", "SchemaError", "render", "rows_checksum"]
