"""Seedable default-cascade simulator on random directed weighted interbank networks."""

__version__ = "0.1.0"

from .balance import (
    BalanceSheet,
    ConstantRule,
    ResidualRule,
    ScaledUniformRule,
    SheetConfig,
    SolvencyParams,
    build_sheets,
    capital_buffer,
    is_solvent_general,
)
from .cascade import (
    CascadeParams,
    CascadeResult,
    CascadeState,
    apply_initial_shock,
    draw_shock_ids,
    initial_state,
    propagate_round,
    run_cascade,
)
from .experiment import (
    ComparisonReport,
    GridPoint,
    SummaryStats,
    SweepConfig,
    SweepResult,
    compare_sweeps,
    correlation,
    run_sweep,
    summarize,
    write_sweep_csv,
)
from .netgen import (
    DegreeStats,
    DirectedWeightedNetwork,
    NetworkConfig,
    PathLength,
    UniformWeights,
    UnitWeights,
    average_clustering,
    average_path_length,
    degree_pmf_binomial,
    degree_pmf_poisson,
    degree_stats,
    generate,
    link_count_pmf,
    local_clustering,
    path_length_estimate,
    read_edge_list,
    write_edge_list,
)
from .spread import (
    DiffusionState,
    TransitionMatrix,
    diffusion_step,
    lattice_walk_3d,
    random_walk,
    transition_matrix,
)

__all__ = [
    "__version__",
    "BalanceSheet",
    "ConstantRule",
    "ResidualRule",
    "ScaledUniformRule",
    "SheetConfig",
    "SolvencyParams",
    "build_sheets",
    "capital_buffer",
    "is_solvent_general",
    "CascadeParams",
    "CascadeResult",
    "CascadeState",
    "apply_initial_shock",
    "draw_shock_ids",
    "initial_state",
    "propagate_round",
    "run_cascade",
    "ComparisonReport",
    "GridPoint",
    "SummaryStats",
    "SweepConfig",
    "SweepResult",
    "compare_sweeps",
    "correlation",
    "run_sweep",
    "summarize",
    "write_sweep_csv",
    "DegreeStats",
    "DirectedWeightedNetwork",
    "NetworkConfig",
    "PathLength",
    "UniformWeights",
    "UnitWeights",
    "average_clustering",
    "average_path_length",
    "degree_pmf_binomial",
    "degree_pmf_poisson",
    "degree_stats",
    "generate",
    "link_count_pmf",
    "local_clustering",
    "path_length_estimate",
    "read_edge_list",
    "write_edge_list",
    "DiffusionState",
    "TransitionMatrix",
    "diffusion_step",
    "lattice_walk_3d",
    "random_walk",
    "transition_matrix",
]
