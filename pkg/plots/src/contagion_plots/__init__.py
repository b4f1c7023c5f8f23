"""Publication figures from the contagion simulator's CSV artifacts."""

from .figures import KINDS, FigureSpec, build_figure, render
from .parser import (
    SUMMARY_SENTINEL,
    SWEEP_COLUMNS,
    WALK_COLUMNS,
    SchemaError,
    SweepSeries,
    WalkPaths,
    parse_sweep_csv,
    parse_walk_csv,
)

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "SUMMARY_SENTINEL",
    "SWEEP_COLUMNS",
    "WALK_COLUMNS",
    "FigureSpec",
    "SchemaError",
    "SweepSeries",
    "WalkPaths",
    "__version__",
    "build_figure",
    "parse_sweep_csv",
    "parse_walk_csv",
    "render",
]
