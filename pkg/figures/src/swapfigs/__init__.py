"""Viewer for entswap concurrence-scan CSV files."""

from .render import FigureDataError, FigureSpec, ScanData, build_figure, load_scan, render

__version__ = "0.1.0"
