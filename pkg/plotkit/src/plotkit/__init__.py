"""Offline figure generation for afmhd CSV outputs."""

from .errors import IoError, PlotError, SchemaMismatch
from .figspec import FigureSpec, load_figure_spec
from .phash import dhash, hamming
from .render import render

__all__ = ["FigureSpec", "IoError", "PlotError", "SchemaMismatch",
           "dhash", "hamming", "load_figure_spec", "render"]

__version__ = "0.1.0"
