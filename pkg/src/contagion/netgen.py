"""Directed weighted random networks and their structural analytics.

Networks follow the directed Bernoulli-link model: every ordered pair of
distinct nodes carries a link independently with probability ``p``, so a
network on ``n`` nodes has at most ``n*(n-1)`` links. Link weights are
either all 1 or drawn uniformly from a positive interval.

The module also provides the standard analytic link-count and degree
distributions for this model, clustering coefficients (measured on the
undirected projection), and shortest-path statistics (measured on the
directed graph).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterator, Union

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .rng import make_rng, validate_seed

__all__ = [
    "UnitWeights",
    "UniformWeights",
    "WeightRule",
    "NetworkConfig",
    "DirectedWeightedNetwork",
    "DegreeStats",
    "PathLength",
    "generate",
    "degree_stats",
    "link_count_pmf",
    "degree_pmf_binomial",
    "degree_pmf_poisson",
    "local_clustering",
    "average_clustering",
    "average_path_length",
    "path_length_estimate",
    "write_edge_list",
    "read_edge_list",
]


@dataclass(frozen=True)
class UnitWeights:
    """Every link carries weight 1."""


@dataclass(frozen=True)
class UniformWeights:
    """Link weights drawn uniformly from [lo, hi), both bounds positive."""

    lo: float = 0.5
    hi: float = 1.5

    def __post_init__(self) -> None:
        if not (0.0 < self.lo < self.hi):
            raise ValueError(f"weight bounds must satisfy 0 < lo < hi, got lo={self.lo}, hi={self.hi}")


WeightRule = Union[UnitWeights, UniformWeights]

DEFAULT_WEIGHT_RULE = UniformWeights(0.5, 1.5)


@dataclass(frozen=True)
class NetworkConfig:
    """Recipe for one random network; equal configs always produce equal networks.

    Attributes:
        n: number of nodes (banks), at least 1.
        p: probability of each directed link, in [0, 1].
        weight_rule: how link weights are drawn.
        seed: 64-bit unsigned seed for the generator stream.
    """

    n: int
    p: float
    weight_rule: WeightRule = DEFAULT_WEIGHT_RULE
    seed: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not isinstance(self.weight_rule, (UnitWeights, UniformWeights)):
            raise ValueError(f"unknown weight rule {self.weight_rule!r}")
        validate_seed(self.seed)


@dataclass(frozen=True)
class DirectedWeightedNetwork:
    """Immutable directed weighted graph on nodes 0..n-1.

    ``weights[i, j] > 0`` iff there is a link i -> j with that weight.
    No self-loops, at most one link per ordered pair. Instances are
    read-only and safe to share across workers.
    """

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weight matrix must be square, got shape {w.shape}")
        if w.shape[0] < 1:
            raise ValueError("network needs at least one node")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative (0 means no link)")
        if np.any(np.diagonal(w) != 0):
            raise ValueError("self-loops are not allowed")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_edges(cls, n: int, edges) -> "DirectedWeightedNetwork":
        """Build a network from (source, target, weight) triples."""
        w = np.zeros((n, n))
        for src, dst, weight in edges:
            if not (0 <= src < n and 0 <= dst < n):
                raise ValueError(f"node id out of range in edge ({src}, {dst})")
            if src == dst:
                raise ValueError(f"self-loop on node {src}")
            if w[src, dst] != 0:
                raise ValueError(f"duplicate link ({src}, {dst})")
            if not weight > 0:
                raise ValueError(f"link ({src}, {dst}) must have positive weight, got {weight}")
            w[src, dst] = weight
        return cls(w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(self.weights))

    def has_edge(self, src: int, dst: int) -> bool:
        self._check_node(src)
        self._check_node(dst)
        return self.weights[src, dst] > 0

    def weight(self, src: int, dst: int) -> float:
        """Weight of link src -> dst, 0.0 if absent."""
        self._check_node(src)
        self._check_node(dst)
        return float(self.weights[src, dst])

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Links as (source, target, weight), in row-major order."""
        rows, cols = np.nonzero(self.weights)
        for i, j in zip(rows.tolist(), cols.tolist()):
            yield i, j, float(self.weights[i, j])

    def in_weight_sums(self) -> np.ndarray:
        """Per-node sum of incoming link weights (interbank assets)."""
        return self.weights.sum(axis=0)

    def out_weight_sums(self) -> np.ndarray:
        """Per-node sum of outgoing link weights (interbank liabilities)."""
        return self.weights.sum(axis=1)

    def in_degrees(self) -> np.ndarray:
        return np.count_nonzero(self.weights, axis=0)

    def out_degrees(self) -> np.ndarray:
        return np.count_nonzero(self.weights, axis=1)

    @cached_property
    def undirected_adjacency(self) -> np.ndarray:
        """Boolean adjacency of the undirected projection (link in either direction)."""
        present = self.weights > 0
        proj = present | present.T
        proj.setflags(write=False)
        return proj

    def _check_node(self, v: int) -> None:
        if not (isinstance(v, (int, np.integer)) and 0 <= v < self.n):
            raise ValueError(f"unknown node id {v!r} (network has {self.n} nodes)")


@dataclass(frozen=True)
class DegreeStats:
    """Per-node degree counts plus the mean total degree z_av = 2*edges/n."""

    in_degrees: np.ndarray
    out_degrees: np.ndarray
    total_degrees: np.ndarray
    z_av: float


@dataclass(frozen=True)
class PathLength:
    """Mean directed shortest-path hops over reachable ordered pairs."""

    mean: float
    reachable_pairs: int
    unreachable_pairs: int


def generate(config: NetworkConfig) -> DirectedWeightedNetwork:
    """Sample a directed weighted network from the Bernoulli-link model.

    Each of the n*(n-1) ordered pairs carries a link independently with
    probability ``config.p``. Link presence is drawn before weights, so two
    configs differing only in weight rule share the same link pattern.
    Deterministic: a fixed config is bit-identical across runs and platforms.
    """
    rng = make_rng(config.seed)
    n = config.n
    present = rng.random((n, n)) < config.p
    np.fill_diagonal(present, False)
    if isinstance(config.weight_rule, UniformWeights):
        draws = rng.uniform(config.weight_rule.lo, config.weight_rule.hi, size=(n, n))
        weights = np.where(present, draws, 0.0)
    else:
        weights = present.astype(np.float64)
    return DirectedWeightedNetwork(weights)


def degree_stats(network: DirectedWeightedNetwork) -> DegreeStats:
    ins = network.in_degrees()
    outs = network.out_degrees()
    total = ins + outs
    return DegreeStats(
        in_degrees=ins,
        out_degrees=outs,
        total_degrees=total,
        z_av=2.0 * network.edge_count / network.n,
    )


def _binomial_pmf(k: int, trials: int, p: float) -> float:
    """P(X = k) for X ~ Binomial(trials, p), stable for large trial counts."""
    if p == 0.0:
        return 1.0 if k == 0 else 0.0
    if p == 1.0:
        return 1.0 if k == trials else 0.0
    comb = math.comb(trials, k)
    if comb.bit_length() <= 1020:
        a = p**k
        b = (1.0 - p) ** (trials - k)
        if (a > 0.0 or k == 0) and (b > 0.0 or k == trials):
            return float(comb) * a * b
    log_pmf = (
        math.lgamma(trials + 1)
        - math.lgamma(k + 1)
        - math.lgamma(trials - k + 1)
        + k * math.log(p)
        + (trials - k) * math.log1p(-p)
    )
    return math.exp(log_pmf)


def _check_probability(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")


def link_count_pmf(n: int, p: float, links: int) -> float:
    """Probability that an undirected n-node network has exactly ``links`` links.

    Binomial over the C(n, 2) possible undirected pairs:
    C(C(n,2), L) * p**L * (1-p)**(C(n,2) - L).
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    _check_probability(p)
    max_links = math.comb(n, 2)
    if not (isinstance(links, (int, np.integer)) and 0 <= links <= max_links):
        raise ValueError(f"link count must lie in [0, {max_links}], got {links!r}")
    return _binomial_pmf(int(links), max_links, p)


def degree_pmf_binomial(n: int, p: float, z: int) -> float:
    """Degree distribution of the Bernoulli-link model: C(n-1, z) * p**z * (1-p)**(n-1-z)."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    _check_probability(p)
    if not (isinstance(z, (int, np.integer)) and 0 <= z <= n - 1):
        raise ValueError(f"degree must lie in [0, {n - 1}], got {z!r}")
    return _binomial_pmf(int(z), n - 1, p)


def degree_pmf_poisson(z_av: float, z: int) -> float:
    """Poisson approximation of the degree distribution: z_av**z * exp(-z_av) / z!."""
    if not z_av > 0:
        raise ValueError(f"mean degree must be positive, got {z_av}")
    if not (isinstance(z, (int, np.integer)) and z >= 0):
        raise ValueError(f"degree must be a nonnegative integer, got {z!r}")
    return math.exp(z * math.log(z_av) - z_av - math.lgamma(z + 1))


def local_clustering(network: DirectedWeightedNetwork, v: int) -> float:
    """Clustering coefficient of node v on the undirected projection.

    Counts ordered pairs of v's neighbours that are themselves adjacent,
    divided by d(v) * (d(v) - 1). Nodes with projection degree < 2 get 0.
    """
    network._check_node(v)
    proj = network.undirected_adjacency
    nbrs = np.flatnonzero(proj[v])
    d = len(nbrs)
    if d < 2:
        return 0.0
    adjacent_ordered_pairs = int(proj[np.ix_(nbrs, nbrs)].sum())
    return adjacent_ordered_pairs / (d * (d - 1))


def average_clustering(network: DirectedWeightedNetwork) -> float:
    """Mean local clustering over all nodes of the undirected projection."""
    proj = network.undirected_adjacency.astype(np.float64)
    deg = proj.sum(axis=1)
    # (proj @ proj)[v, u] counts 2-step walks v -> w -> u; masking by proj[v, u]
    # and summing over u yields the ordered adjacent neighbour pairs of v.
    closed = (proj * (proj @ proj)).sum(axis=1)
    denom = deg * (deg - 1.0)
    coeffs = np.divide(closed, denom, out=np.zeros_like(closed), where=denom > 0)
    return float(coeffs.mean())


def average_path_length(network: DirectedWeightedNetwork) -> PathLength:
    """Mean shortest-path hop count over ordered pairs joined by a directed path.

    Unreachable pairs are excluded from the mean; their count is reported in
    the result. Raises ValueError("disconnected") when no ordered pair is
    reachable at all.
    """
    n = network.n
    adj = sparse.csr_matrix((network.weights > 0).astype(np.int8))
    dist = csgraph.shortest_path(adj, method="D", directed=True, unweighted=True)
    off_diagonal = ~np.eye(n, dtype=bool)
    finite = np.isfinite(dist) & off_diagonal
    reachable = int(finite.sum())
    total_pairs = n * (n - 1)
    if reachable == 0:
        raise ValueError("disconnected: no ordered pair is joined by a directed path")
    return PathLength(
        mean=float(dist[finite].mean()),
        reachable_pairs=reachable,
        unreachable_pairs=total_pairs - reachable,
    )


def path_length_estimate(n: int, z_av: float) -> float:
    """Analytic path-length estimate log(n) / log(z_av) for mean degree z_av > 1."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if not z_av > 1.0:
        raise ValueError(f"estimate requires mean degree > 1, got {z_av}")
    return math.log(n) / math.log(z_av)


_HEADER_RE = re.compile(r"#\s*n=(\d+)\s+directed\s+weighted\s*$")


def write_edge_list(network: DirectedWeightedNetwork, path) -> None:
    """Serialize as text: header ``# n=<count> directed weighted``, then one
    ``source target weight`` line per link. Weights carry 17 significant
    digits so a round-trip is bit-exact."""
    lines = [f"# n={network.n} directed weighted"]
    for i, j, w in network.edges():
        lines.append(f"{i} {j} {w:.17g}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_edge_list(path) -> DirectedWeightedNetwork:
    """Parse the edge-list text format; errors carry 1-based line numbers."""
    text = Path(path).read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines:
        raise ValueError("line 1: empty file, expected header '# n=<count> directed weighted'")
    header = _HEADER_RE.match(lines[0].strip())
    if header is None:
        raise ValueError("line 1: expected header '# n=<count> directed weighted'")
    n = int(header.group(1))
    if n < 1:
        raise ValueError("line 1: node count must be at least 1")
    weights = np.zeros((n, n))
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ValueError(f"line {lineno}: expected 'source target weight', got {raw!r}")
        try:
            src, dst = int(fields[0]), int(fields[1])
            w = float(fields[2])
        except ValueError:
            raise ValueError(f"line {lineno}: could not parse 'source target weight' from {raw!r}") from None
        if not (0 <= src < n and 0 <= dst < n):
            raise ValueError(f"line {lineno}: node id out of range for n={n}")
        if src == dst:
            raise ValueError(f"line {lineno}: self-loop on node {src}")
        if weights[src, dst] != 0:
            raise ValueError(f"line {lineno}: duplicate link ({src}, {dst})")
        if not w > 0:
            raise ValueError(f"line {lineno}: weight must be positive, got {w}")
        weights[src, dst] = w
    return DirectedWeightedNetwork(weights)
