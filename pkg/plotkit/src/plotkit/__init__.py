"""Batch figure generation for multi-link simulator sweep results."""

from .figures import (
    CSV_COLUMNS,
    FigureSpec,
    PlotError,
    RenderInfo,
    load_csv_dir,
    manifest,
    render,
    render_figures,
)

__version__ = "0.1.0"

__all__ = [
    "CSV_COLUMNS",
    "FigureSpec",
    "PlotError",
    "RenderInfo",
    "load_csv_dir",
    "manifest",
    "render",
    "render_figures",
    "__version__",
]
