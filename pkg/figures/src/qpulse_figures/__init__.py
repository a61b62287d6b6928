"""Figure rendering for qpulse simulation CSVs."""

from .csvdata import CsvData, load_csv
from .specs import FigureSpec, Panel, builtin_spec, BUILTIN_SPECS
from .render import RenderResult, render

__all__ = ["CsvData", "load_csv", "FigureSpec", "Panel", "builtin_spec",
           "BUILTIN_SPECS", "RenderResult", "render"]
