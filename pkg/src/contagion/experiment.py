"""Monte-Carlo probability sweeps over the cascade model.

A sweep runs `iterations` independent trials at each of `grid_points`
equally spaced link probabilities. Every trial builds a fresh network,
fresh sheets and a fresh shock from its own child seed, so results are
reproducible per master seed and identical under any parallel schedule.
"""

from __future__ import annotations

import csv
import datetime
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from .balance import SheetConfig, build_sheets
from .cascade import CascadeParams, apply_initial_shock, draw_shock_ids, initial_state, run_cascade
from .netgen import DEFAULT_WEIGHT_RULE, NetworkConfig, WeightRule, generate
from .rng import child_seed, split_seed, validate_seed

__all__ = [
    "SweepConfig",
    "GridPoint",
    "SweepResult",
    "SummaryStats",
    "ComparisonReport",
    "run_sweep",
    "summarize",
    "compare_sweeps",
    "correlation",
    "write_sweep_csv",
]

# Sub-stream purposes within one trial.
_STREAM_NETWORK = 0
_STREAM_SHEETS = 1
_STREAM_SHOCK = 2


@dataclass(frozen=True)
class SweepConfig:
    """Full recipe for one sweep; equal configs give equal results."""

    n_banks: int = 100
    n_shocked: int = 15
    p_min: float = 0.04
    p_max: float = 0.10
    grid_points: int = 15
    iterations: int = 10
    master_seed: int = 0
    sheet_config: SheetConfig = SheetConfig()
    weight_rule: WeightRule = DEFAULT_WEIGHT_RULE
    recovery_rate: float = 0.0
    q: float = 1.0
    phi_mode: str = "weight"
    fixed_network: bool = False

    def __post_init__(self) -> None:
        if not (isinstance(self.n_banks, (int, np.integer)) and self.n_banks >= 1):
            raise ValueError(f"n_banks must be a positive integer, got {self.n_banks!r}")
        if not (isinstance(self.n_shocked, (int, np.integer)) and 0 <= self.n_shocked <= self.n_banks):
            raise ValueError(f"n_shocked must lie in [0, n_banks], got {self.n_shocked!r}")
        if not 0.0 <= self.p_min <= self.p_max <= 1.0:
            raise ValueError(f"need 0 <= p_min <= p_max <= 1, got p_min={self.p_min}, p_max={self.p_max}")
        if not (isinstance(self.grid_points, (int, np.integer)) and self.grid_points >= 1):
            raise ValueError(f"grid_points must be a positive integer, got {self.grid_points!r}")
        if not (isinstance(self.iterations, (int, np.integer)) and self.iterations >= 1):
            raise ValueError(f"iterations must be a positive integer, got {self.iterations!r}")
        validate_seed(self.master_seed, "master_seed")
        # Delegated checks: CascadeParams validates recovery/q/phi_mode bounds.
        CascadeParams(self.recovery_rate, self.q, self.phi_mode)

    def p_grid(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.grid_points)

    @property
    def solvency_ceiling(self) -> float:
        """Best possible percent solvent once the shock lands."""
        return 100.0 * (self.n_banks - self.n_shocked) / self.n_banks


@dataclass(frozen=True)
class GridPoint:
    """All iteration outcomes at one probability value."""

    p: float
    values: tuple[float, ...]

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def std(self) -> float:
        """Population (divide-by-n) standard deviation."""
        return float(np.std(self.values))

    @property
    def min(self) -> float:
        return float(np.min(self.values))

    @property
    def max(self) -> float:
        return float(np.max(self.values))


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    points: tuple[GridPoint, ...]
    created_at: str = field(default="", compare=False)

    def means(self) -> np.ndarray:
        return np.array([pt.mean for pt in self.points])

    def p_values(self) -> np.ndarray:
        return np.array([pt.p for pt in self.points])


@dataclass(frozen=True)
class SummaryStats:
    """Order statistics and moments of the per-grid-point means."""

    mean: float
    std: float
    min: float
    p25: float
    median: float
    p75: float
    max: float


@dataclass(frozen=True)
class ComparisonReport:
    """Welch two-sample t-test on grid-point means at the 5% level."""

    mean_difference: float
    t_statistic: float
    p_value: float
    significant: bool


def _trial_percent_solvent(config: SweepConfig, grid_index: int, iteration: int, p: float) -> float:
    trial = grid_index * config.iterations + iteration
    trial_seed = child_seed(config.master_seed, trial)
    if config.fixed_network:
        # One network per grid point: every iteration reuses trial 0's network stream.
        network_seed = split_seed(child_seed(config.master_seed, grid_index * config.iterations), _STREAM_NETWORK)
    else:
        network_seed = split_seed(trial_seed, _STREAM_NETWORK)
    network = generate(NetworkConfig(config.n_banks, p, config.weight_rule, network_seed))
    sheets = build_sheets(network, config.sheet_config, split_seed(trial_seed, _STREAM_SHEETS))
    shock = draw_shock_ids(config.n_banks, config.n_shocked, split_seed(trial_seed, _STREAM_SHOCK))
    state = initial_state(network, sheets, CascadeParams(config.recovery_rate, config.q, config.phi_mode))
    apply_initial_shock(state, shock)
    return run_cascade(state).percent_solvent


def run_sweep(config: SweepConfig, threads: int = 1) -> SweepResult:
    """Run the full grid; deterministic per master seed for any thread count.

    Trials are independent: each derives its streams from (master seed,
    grid index, iteration). Results are reduced by trial index, so the
    executor schedule cannot change the output.
    """
    if not (isinstance(threads, (int, np.integer)) and threads >= 1):
        raise ValueError(f"threads must be a positive integer, got {threads!r}")
    grid = config.p_grid()
    tasks = [
        (gi, it, float(p))
        for gi, p in enumerate(grid)
        for it in range(config.iterations)
    ]
    outcomes = np.empty(len(tasks))
    if threads == 1:
        for k, (gi, it, p) in enumerate(tasks):
            outcomes[k] = _trial_percent_solvent(config, gi, it, p)
    else:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            for k, value in enumerate(
                pool.map(lambda task: _trial_percent_solvent(config, *task), tasks)
            ):
                outcomes[k] = value
    points = []
    for gi, p in enumerate(grid):
        block = outcomes[gi * config.iterations : (gi + 1) * config.iterations]
        points.append(GridPoint(float(p), tuple(float(v) for v in block)))
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    return SweepResult(config=config, points=tuple(points), created_at=stamp)


def summarize(result: SweepResult) -> SummaryStats:
    """Moments and quartiles of the grid-point means."""
    if not result.points:
        raise ValueError("cannot summarize an empty sweep")
    means = result.means()
    q25, q50, q75 = np.percentile(means, [25, 50, 75])
    return SummaryStats(
        mean=float(means.mean()),
        std=float(means.std()),
        min=float(means.min()),
        p25=float(q25),
        median=float(q50),
        p75=float(q75),
        max=float(means.max()),
    )


def compare_sweeps(a: SweepResult, b: SweepResult) -> ComparisonReport:
    """Welch t-test between two sweeps' grid-point means."""
    if len(a.points) < 2 or len(b.points) < 2:
        raise ValueError("comparison needs at least 2 grid points in each sweep")
    means_a, means_b = a.means(), b.means()
    test = stats.ttest_ind(means_a, means_b, equal_var=False)
    return ComparisonReport(
        mean_difference=float(means_a.mean() - means_b.mean()),
        t_statistic=float(test.statistic),
        p_value=float(test.pvalue),
        significant=bool(test.pvalue < 0.05),
    )


def correlation(result: SweepResult) -> float:
    """Spearman rank correlation between p and mean percent solvent."""
    if len(result.points) < 3:
        raise ValueError("correlation needs at least 3 grid points")
    means = result.means()
    if np.all(means == means[0]):
        raise ValueError("correlation undefined for a constant series")
    return float(stats.spearmanr(result.p_values(), means).statistic)


def write_sweep_csv(result: SweepResult, path) -> None:
    """Write one row per grid point, then a `# summary` block of stat,value rows.

    Standard deviations use the population convention. Output depends only
    on the sweep data, so identical configs give byte-identical files.
    """
    summary = summarize(result)
    with Path(path).open("w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["p", "mean_solvent_pct", "std_solvent_pct", "min", "max", "iterations"])
        for pt in result.points:
            writer.writerow(
                [repr(pt.p), repr(pt.mean), repr(pt.std), repr(pt.min), repr(pt.max), len(pt.values)]
            )
        fh.write("# summary\n")
        writer.writerow(["stat", "value"])
        for name in ("mean", "std", "min", "p25", "median", "p75", "max"):
            writer.writerow([name, repr(getattr(summary, name))])
