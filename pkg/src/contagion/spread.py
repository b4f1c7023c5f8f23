"""Generic spreading processes on networks: diffusion and random walks.

Both operate on the undirected projection of the directed network (a link
in either direction connects the pair). Diffusion is an explicit Euler
step of the graph heat equation; the walk follows the degree-normalized
transition matrix. A 3-D lattice walk is included for the classical
mean-squared-displacement demonstration.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .netgen import DirectedWeightedNetwork
from .rng import make_rng

__all__ = [
    "DiffusionState",
    "TransitionMatrix",
    "diffusion_step",
    "transition_matrix",
    "random_walk",
    "lattice_walk_3d",
    "write_walk_csv",
]


@dataclass(frozen=True)
class DiffusionState:
    """Per-node quantity phi at step t, advanced by diffusion_step."""

    phi: np.ndarray
    c_dt: float
    t: int = 0

    def __post_init__(self) -> None:
        phi = np.array(self.phi, dtype=np.float64)
        if phi.ndim != 1 or phi.size < 1:
            raise ValueError(f"phi must be a 1-D per-node vector, got shape {phi.shape}")
        if not np.all(np.isfinite(phi)):
            raise ValueError("phi must be finite")
        if not self.c_dt > 0:
            raise ValueError(f"c_dt must be positive, got {self.c_dt}")
        if not (isinstance(self.t, (int, np.integer)) and self.t >= 0):
            raise ValueError(f"t must be a nonnegative integer, got {self.t!r}")
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic single-step walk matrix; entry (i, j) is P(i -> j)."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"transition matrix must be square, got shape {m.shape}")
        if np.any(m < 0) or np.any(m > 1):
            raise ValueError("transition probabilities must lie in [0, 1]")
        row_sums = m.sum(axis=1)
        if np.any(np.abs(row_sums - 1.0) > 1e-12):
            raise ValueError("every row must sum to 1 within 1e-12")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def _adjacency(network: DirectedWeightedNetwork, weighted: bool) -> np.ndarray:
    if weighted:
        return network.weights + network.weights.T
    return network.undirected_adjacency.astype(np.float64)


def diffusion_step(
    network: DirectedWeightedNetwork, state: DiffusionState, weighted: bool = False
) -> DiffusionState:
    """One explicit Euler step: phi_i += c_dt * sum_j A_ij (phi_j - phi_i).

    Computed from pairwise differences, so a uniform phi is a fixed point
    exactly and the total sum is conserved up to rounding. Enforces the
    stability bound c_dt * max_degree <= 1; the step diverges beyond it.
    """
    if len(state.phi) != network.n:
        raise ValueError(f"phi has {len(state.phi)} entries for a {network.n}-node network")
    adjacency = _adjacency(network, weighted)
    max_degree = float(adjacency.sum(axis=1).max())
    if state.c_dt * max_degree > 1.0 + 1e-12:
        raise ValueError(
            f"unstable step: c_dt * max_degree = {state.c_dt * max_degree:.6g} exceeds 1"
        )
    differences = state.phi[None, :] - state.phi[:, None]
    flux = (adjacency * differences).sum(axis=1)
    return DiffusionState(state.phi + state.c_dt * flux, state.c_dt, state.t + 1)


def transition_matrix(network: DirectedWeightedNetwork) -> TransitionMatrix:
    """Uniform walk on the projection: P_ij = 1/d(i) for each neighbor j.

    An isolated node gets P_ii = 1 so the matrix stays row-stochastic on
    arbitrary networks.
    """
    adjacency = network.undirected_adjacency.astype(np.float64)
    degree = adjacency.sum(axis=1)
    matrix = np.divide(adjacency, degree[:, None], out=np.zeros_like(adjacency), where=degree[:, None] > 0)
    isolated = np.flatnonzero(degree == 0)
    matrix[isolated, isolated] = 1.0
    return TransitionMatrix(matrix)


def random_walk(network: DirectedWeightedNetwork, start: int, steps: int, seed: int) -> list[int]:
    """Walk `steps` transitions from `start`; returns the steps+1 node sequence."""
    network._check_node(start)
    if not (isinstance(steps, (int, np.integer)) and steps >= 0):
        raise ValueError(f"steps must be a nonnegative integer, got {steps!r}")
    cumulative = np.cumsum(transition_matrix(network).matrix, axis=1)
    cumulative[:, -1] = 1.0  # guard against rounding shortfall in the last bin
    rng = make_rng(seed)
    draws = rng.random(int(steps))
    sequence = [int(start)]
    current = int(start)
    for r in draws:
        current = int(np.searchsorted(cumulative[current], r, side="right"))
        sequence.append(current)
    return sequence


_AXIS_MOVES = np.array(
    [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], dtype=np.int64
)


def lattice_walk_3d(walkers: int, steps: int, seed: int) -> list[np.ndarray]:
    """Independent walkers on the cubic lattice, each starting at the origin.

    Every step moves one unit along one of the 6 axis directions, chosen
    uniformly. Returns one (steps+1, 3) integer path per walker.
    """
    if not (isinstance(walkers, (int, np.integer)) and walkers >= 1):
        raise ValueError(f"walkers must be a positive integer, got {walkers!r}")
    if not (isinstance(steps, (int, np.integer)) and steps >= 0):
        raise ValueError(f"steps must be a nonnegative integer, got {steps!r}")
    rng = make_rng(seed)
    choices = rng.integers(0, 6, size=(int(walkers), int(steps)))
    paths = np.zeros((int(walkers), int(steps) + 1, 3), dtype=np.int64)
    if steps:
        np.cumsum(_AXIS_MOVES[choices], axis=1, out=paths[:, 1:, :])
    return [paths[w] for w in range(int(walkers))]


def write_walk_csv(paths: Sequence[np.ndarray], path) -> None:
    """Dump lattice paths as CSV rows `walker_id,step,x,y,z`."""
    with Path(path).open("w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["walker_id", "step", "x", "y", "z"])
        for walker_id, walk in enumerate(paths):
            for step, (x, y, z) in enumerate(walk):
                writer.writerow([walker_id, step, int(x), int(y), int(z)])
