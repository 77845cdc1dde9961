"""Offline plotting for bimshap experiment results."""

from .figures import FigureSpec, build_figure, render_budget_vs_spread
from .results import ResultFormatError, ResultRow, read_results
from .timing import render_timing_table

__version__ = "0.1.0"
