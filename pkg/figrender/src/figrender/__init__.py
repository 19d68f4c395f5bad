"""Render phase-distribution figures from phasekit CSV files.

This package consumes only the versioned CSV format written by the phasekit
command line tool; it never imports phasekit and never recomputes or alters
the numbers it plots.
"""

from .csvread import Dataset, FormatError, read_csv
from .render import render_figure1a, render_overlay

__all__ = [
    "Dataset",
    "FormatError",
    "read_csv",
    "render_figure1a",
    "render_overlay",
]

__version__ = "0.1.0"
