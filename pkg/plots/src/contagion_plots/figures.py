"""Figure builders: sweep curves, summary tables, 3-D walk paths.

`build_figure` turns a parsed CSV into a matplotlib Figure; `render` writes
it as a PNG. Rendering is deterministic: the same CSV yields the same data,
axes ranges, and file.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.figure import Figure

from .parser import SchemaError, parse_sweep_csv, parse_walk_csv

KINDS = ("sweep", "summary", "walk3d")

MEAN_LABEL = "mean solvent %"
REFERENCE_LABEL = "reference"


@dataclass(frozen=True)
class FigureSpec:
    """One figure job: which CSV, which figure kind, where the PNG goes."""

    input_csv: str | Path
    kind: str
    output_path: str | Path
    reference_line: float | None = 85.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.reference_line is not None and not (0.0 <= self.reference_line <= 100.0):
            raise ValueError(f"reference_line must be a percentage, got {self.reference_line}")


def _sweep_figure(spec: FigureSpec) -> Figure:
    series = parse_sweep_csv(spec.input_csv)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.fill_between(
        series.p, series.minimum, series.maximum,
        color="tab:blue", alpha=0.15, linewidth=0, label="min-max range",
    )
    ax.plot(series.p, series.mean, color="tab:blue", marker="o", label=MEAN_LABEL)
    if spec.reference_line is not None:
        ax.axhline(
            spec.reference_line, color="tab:red", linestyle=":", label=REFERENCE_LABEL
        )
    ax.set_xlabel("link probability p")
    ax.set_ylabel("solvent banks (%)")
    ax.set_ylim(0.0, 100.0)
    ax.set_title("Mean solvent share vs link probability")
    ax.legend(loc="lower right")
    return fig


def _summary_figure(spec: FigureSpec) -> Figure:
    series = parse_sweep_csv(spec.input_csv)
    if not series.summary:
        raise SchemaError(f"{spec.input_csv}: no summary block to tabulate")
    fig, ax = plt.subplots(figsize=(4.0, 0.5 + 0.4 * len(series.summary)))
    ax.axis("off")
    table = ax.table(
        cellText=[[stat, repr(value)] for stat, value in series.summary.items()],
        colLabels=["stat", "value"],
        cellLoc="left",
        loc="center",
    )
    table.scale(1.0, 1.4)
    ax.set_title("Sweep summary statistics")
    return fig


def _walk_figure(spec: FigureSpec) -> Figure:
    walks = parse_walk_csv(spec.input_csv)
    fig = plt.figure(figsize=(6.5, 6.0))
    ax = fig.add_subplot(projection="3d")
    for path in walks.paths:
        ax.plot(path[:, 0], path[:, 1], path[:, 2], linewidth=0.6, alpha=0.5)
    ax.scatter([0], [0], [0], color="tab:red", marker="o", label="origin")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.set_title(f"3-D lattice walks ({len(walks)} walkers)")
    ax.legend(loc="upper right")
    return fig


_BUILDERS = {"sweep": _sweep_figure, "summary": _summary_figure, "walk3d": _walk_figure}


def build_figure(spec: FigureSpec) -> Figure:
    """Build the figure for `spec` without touching the filesystem output."""
    return _BUILDERS[spec.kind](spec)


def render(spec: FigureSpec) -> Path:
    """Write `spec`'s figure as a PNG and return the output path."""
    fig = build_figure(spec)
    output = Path(spec.output_path)
    try:
        fig.savefig(output, format="png", dpi=150)
    finally:
        plt.close(fig)
    return output
