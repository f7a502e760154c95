"""Static figure rendering for sum-rate sweep CSVs."""

__version__ = "0.1.0"

from .render import FigureSpec, SchemaError, Series, build_figure, load_series, render
