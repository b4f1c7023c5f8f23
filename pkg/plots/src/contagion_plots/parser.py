"""Readers for the simulator's CSV artifacts.

Each reader validates the file against the producing contract before
returning data, so a figure job fed the wrong file fails loudly and names
exactly which column is missing.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

SWEEP_COLUMNS = ("p", "mean_solvent_pct", "std_solvent_pct", "min", "max", "iterations")
WALK_COLUMNS = ("walker_id", "step", "x", "y", "z")
SUMMARY_SENTINEL = "# summary"


class SchemaError(ValueError):
    """Input CSV does not match the expected contract."""


@dataclass(frozen=True)
class SweepSeries:
    """One sweep CSV: per-grid-point rows plus the trailing summary block."""

    p: tuple[float, ...]
    mean: tuple[float, ...]
    std: tuple[float, ...]
    minimum: tuple[float, ...]
    maximum: tuple[float, ...]
    iterations: tuple[int, ...]
    summary: dict[str, float]

    def __len__(self) -> int:
        return len(self.p)


@dataclass(frozen=True)
class WalkPaths:
    """3-D walk paths, one (steps+1, 3) integer array per walker."""

    paths: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.paths)


def _column_indices(header_line: str, required: tuple[str, ...], path) -> dict[str, int]:
    fields = [field.strip() for field in header_line.split(",")]
    missing = [column for column in required if column not in fields]
    if missing:
        raise SchemaError(f"{path}: missing column(s): {', '.join(missing)}")
    return {column: fields.index(column) for column in required}


def _data_lines(path) -> list[str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read: {exc}") from exc
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise SchemaError(f"{path}: empty file")
    return lines


def parse_sweep_csv(path) -> SweepSeries:
    """Parse `p,mean_solvent_pct,std_solvent_pct,min,max,iterations` rows.

    The optional `# summary` block that follows the rows is returned as a
    stat -> value mapping (empty when absent).
    """
    lines = _data_lines(path)
    index = _column_indices(lines[0], SWEEP_COLUMNS, path)
    columns: dict[str, list] = {column: [] for column in SWEEP_COLUMNS}
    summary: dict[str, float] = {}
    in_summary = False
    for lineno, line in enumerate(lines[1:], start=2):
        if line.strip() == SUMMARY_SENTINEL:
            in_summary = True
            continue
        fields = line.split(",")
        if in_summary:
            if fields[0].strip() == "stat":
                continue
            if len(fields) != 2:
                raise SchemaError(f"{path} line {lineno}: expected stat,value")
            summary[fields[0].strip()] = float(fields[1])
            continue
        if len(fields) <= max(index.values()):
            raise SchemaError(f"{path} line {lineno}: expected {len(index)} fields")
        try:
            for column in SWEEP_COLUMNS:
                value = fields[index[column]]
                columns[column].append(int(value) if column == "iterations" else float(value))
        except ValueError as exc:
            raise SchemaError(f"{path} line {lineno}: {exc}") from exc
    if not columns["p"]:
        raise SchemaError(f"{path}: no data rows")
    return SweepSeries(
        p=tuple(columns["p"]),
        mean=tuple(columns["mean_solvent_pct"]),
        std=tuple(columns["std_solvent_pct"]),
        minimum=tuple(columns["min"]),
        maximum=tuple(columns["max"]),
        iterations=tuple(columns["iterations"]),
        summary=summary,
    )


def parse_walk_csv(path) -> WalkPaths:
    """Parse `walker_id,step,x,y,z` rows into one path per walker.

    Rows may arrive in any order; each walker's path is sorted by step and
    must cover steps 0..k without gaps.
    """
    lines = _data_lines(path)
    index = _column_indices(lines[0], WALK_COLUMNS, path)
    points: dict[int, list[tuple[int, int, int, int]]] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) <= max(index.values()):
            raise SchemaError(f"{path} line {lineno}: expected {len(index)} fields")
        try:
            walker, step, x, y, z = (int(fields[index[c]]) for c in WALK_COLUMNS)
        except ValueError as exc:
            raise SchemaError(f"{path} line {lineno}: {exc}") from exc
        points.setdefault(walker, []).append((step, x, y, z))
    paths = []
    for walker in sorted(points):
        rows = sorted(points[walker])
        steps = [row[0] for row in rows]
        if steps != list(range(len(rows))):
            raise SchemaError(f"{path}: walker {walker} has missing or duplicate steps")
        paths.append(np.array([row[1:] for row in rows], dtype=np.int64))
    return WalkPaths(paths=tuple(paths))
