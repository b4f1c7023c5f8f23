"""Command-line entry point.

Subcommands: `sweep` (Monte-Carlo probability sweep), `metrics` (network
analytics on a generated or loaded network), `walk` (random walks, graph
or 3-D lattice). Every run is deterministic given its flags; the seed
falls back to the CONTAGION_SEED environment variable, then 0.

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .experiment import SweepConfig, correlation, run_sweep, write_sweep_csv
from .netgen import (
    DirectedWeightedNetwork,
    NetworkConfig,
    average_clustering,
    average_path_length,
    degree_pmf_binomial,
    degree_pmf_poisson,
    degree_stats,
    generate,
    path_length_estimate,
    read_edge_list,
)
from .rng import split_seed, validate_seed
from .spread import lattice_walk_3d, random_walk, write_walk_csv

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

ENV_SEED = "CONTAGION_SEED"


class UsageError(Exception):
    """Bad flags or config values; maps to exit code 2."""


def _load_config(path: str) -> dict[str, str]:
    """Flat key=value config file; blank lines and # comments are skipped."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc}") from exc
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"--config {path} line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        entries[key.strip()] = value.strip()
    return entries


# Keys a manifest adds beyond the tunable parameters; tolerated on reload
# so a manifest can be fed straight back through --config.
_MANIFEST_ONLY_KEYS = {"command", "version"}


def _resolve(name, flag_value, config, cast, default):
    """Precedence: explicit flag, then config file, then default."""
    if flag_value is not None:
        return flag_value
    if config and name in config:
        raw = config[name]
        try:
            return cast(raw)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"--config key {name}: cannot parse {raw!r}") from exc
    return default


def _parse_bool(raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _resolve_seed(flag_value, config) -> int:
    if flag_value is not None:
        return flag_value
    if config and "seed" in config:
        try:
            return int(config["seed"])
        except ValueError as exc:
            raise UsageError(f"--config key seed: cannot parse {config['seed']!r}") from exc
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            return validate_seed(int(env), ENV_SEED)
        except ValueError as exc:
            raise UsageError(f"{ENV_SEED}: {exc}") from exc
    return 0


def _check_config_keys(config: dict[str, str], known: set[str], source: str) -> None:
    unknown = set(config) - known - _MANIFEST_ONLY_KEYS
    if unknown:
        raise UsageError(f"--config {source}: unknown keys {sorted(unknown)}")


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_manifest(out_path: str, command: str, entries: dict) -> None:
    lines = [f"command={command}", f"version={__version__}"]
    lines += [f"{key}={_format_value(value)}" for key, value in entries.items()]
    Path(str(out_path) + ".manifest").write_text("\n".join(lines) + "\n", encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contagion",
        description="Default cascades, network analytics and walks on random interbank networks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="{sweep,metrics,walk}")

    sweep = sub.add_parser("sweep", help="run a probability sweep and write the results CSV")
    sweep.add_argument("--banks", type=int, help="number of banks (default 100)")
    sweep.add_argument("--shocked", type=int, help="banks forced into default (default 15)")
    sweep.add_argument("--p-min", type=float, help="lowest link probability (default 0.04)")
    sweep.add_argument("--p-max", type=float, help="highest link probability (default 0.10)")
    sweep.add_argument("--grid", type=int, help="grid points, endpoints included (default 15)")
    sweep.add_argument("--iters", type=int, help="iterations per grid point (default 10)")
    sweep.add_argument("--seed", type=int, help=f"master seed (default ${ENV_SEED}, then 0)")
    sweep.add_argument("--recovery", type=float, help="recovered fraction of written-off exposure (default 0.0)")
    sweep.add_argument("--q", type=float, help="fire-sale price for external assets (default 1.0)")
    sweep.add_argument("--threads", type=int, help="worker threads (default: machine parallelism)")
    sweep.add_argument("--fixed-network", action="store_true", default=None,
                       help="reuse one network per grid point instead of one per iteration")
    sweep.add_argument("--config", help="flat key=value file with defaults; flags override it")
    sweep.add_argument("--out", help="output CSV path (required here or in --config)")

    metrics = sub.add_parser("metrics", help="print network analytics as stat,value CSV on stdout")
    metrics.add_argument("--n", type=int, help="nodes of the generated network")
    metrics.add_argument("--p", type=float, help="link probability of the generated network")
    metrics.add_argument("--seed", type=int, help=f"generator seed (default ${ENV_SEED}, then 0)")
    metrics.add_argument("--in", dest="in_path", help="read an edge-list file instead of generating")

    walk = sub.add_parser("walk", help="simulate random walks and write the path CSV")
    walk.add_argument("--lattice", action="store_true", default=None,
                      help="walk the 3-D integer lattice instead of a network")
    walk.add_argument("--walkers", type=int, help="independent walkers (default 1000)")
    walk.add_argument("--steps", type=int, help="steps per walker (default 10)")
    walk.add_argument("--n", type=int, help="nodes of the generated network (graph mode, default 100)")
    walk.add_argument("--p", type=float, help="link probability (graph mode, default 0.1)")
    walk.add_argument("--seed", type=int, help=f"master seed (default ${ENV_SEED}, then 0)")
    walk.add_argument("--config", help="flat key=value file with defaults; flags override it")
    walk.add_argument("--out", help="output CSV path (required here or in --config)")
    return parser


_SWEEP_KEYS = {
    "banks", "shocked", "p_min", "p_max", "grid", "iters", "seed",
    "recovery", "q", "threads", "fixed_network", "out",
}


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args.config) if args.config else {}
    if config:
        _check_config_keys(config, _SWEEP_KEYS, args.config)
    banks = _resolve("banks", args.banks, config, int, 100)
    shocked = _resolve("shocked", args.shocked, config, int, 15)
    p_min = _resolve("p_min", args.p_min, config, float, 0.04)
    p_max = _resolve("p_max", args.p_max, config, float, 0.10)
    grid = _resolve("grid", args.grid, config, int, 15)
    iters = _resolve("iters", args.iters, config, int, 10)
    recovery = _resolve("recovery", args.recovery, config, float, 0.0)
    q = _resolve("q", args.q, config, float, 1.0)
    threads = _resolve("threads", args.threads, config, int, os.cpu_count() or 1)
    fixed_network = _resolve("fixed_network", args.fixed_network, config, _parse_bool, False)
    seed = _resolve_seed(args.seed, config)
    out = _resolve("out", args.out, config, str, None)
    if out is None:
        raise UsageError("--out is required (flag or config)")
    if p_min > p_max:
        raise UsageError("p-min exceeds p-max")
    if threads < 1:
        raise UsageError("--threads must be at least 1")
    try:
        sweep_config = SweepConfig(
            n_banks=banks,
            n_shocked=shocked,
            p_min=p_min,
            p_max=p_max,
            grid_points=grid,
            iterations=iters,
            master_seed=seed,
            recovery_rate=recovery,
            q=q,
            fixed_network=fixed_network,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = run_sweep(sweep_config, threads=threads)
    try:
        write_sweep_csv(result, out)
        _write_manifest(out, "sweep", {
            "banks": banks, "shocked": shocked, "p_min": p_min, "p_max": p_max,
            "grid": grid, "iters": iters, "seed": seed, "recovery": recovery,
            "q": q, "threads": threads, "fixed_network": fixed_network, "out": out,
        })
    except OSError as exc:
        print(f"contagion: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    try:
        trend = correlation(result) if len(result.points) >= 3 else float("nan")
    except ValueError:  # constant series, e.g. every point at the ceiling
        trend = float("nan")
    print(f"wrote {out} ({grid} grid points, {iters} iterations, spearman {trend:.3f})")
    return EXIT_OK


def _metrics_rows(network: DirectedWeightedNetwork, p: float | None) -> list[tuple[str, str]]:
    stats = degree_stats(network)
    n = network.n
    rows: list[tuple[str, str]] = [
        ("n", str(n)),
        ("edges", str(network.edge_count)),
        ("z_av", repr(stats.z_av)),
        ("mean_directed_degree", repr(network.edge_count / n)),
        ("average_clustering", repr(average_clustering(network))),
    ]
    if p is not None:
        rows.insert(1, ("p", repr(float(p))))
        rows.append(("z_av_expected", repr(2.0 * (n - 1) * p)))
        # Projection link density: either direction present.
        rows.append(("clustering_expected", repr(2.0 * p - p * p)))
        if n > 1 and 0.0 < p < 1.0:
            z_av = (n - 1) * p
            gap = max(
                abs(degree_pmf_binomial(n, p, z) - degree_pmf_poisson(z_av, z))
                for z in range(n)
            )
            rows.append(("binomial_poisson_max_gap", repr(gap)))
    try:
        lengths = average_path_length(network)
        rows.append(("average_path_length", repr(lengths.mean)))
        rows.append(("reachable_pairs", str(lengths.reachable_pairs)))
        rows.append(("unreachable_pairs", str(lengths.unreachable_pairs)))
    except ValueError:
        rows.append(("average_path_length", "disconnected"))
    branching = network.edge_count / n
    if branching > 1.0 and n > 1:
        rows.append(("path_length_estimate", repr(path_length_estimate(n, branching))))
    return rows


def cmd_metrics(args: argparse.Namespace) -> int:
    if args.in_path is not None:
        try:
            network = read_edge_list(args.in_path)
        except (OSError, ValueError) as exc:
            print(f"contagion: {args.in_path}: {exc}", file=sys.stderr)
            return EXIT_RUNTIME
        p = None
    else:
        if args.n is None or args.p is None:
            raise UsageError("metrics needs --n and --p, or --in <edge-list>")
        seed = _resolve_seed(args.seed, None)
        try:
            network = generate(NetworkConfig(args.n, args.p, seed=seed))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        p = args.p
    print("stat,value")
    for key, value in _metrics_rows(network, p):
        print(f"{key},{value}")
    return EXIT_OK


_WALK_KEYS = {"lattice", "walkers", "steps", "n", "p", "seed", "out"}


def cmd_walk(args: argparse.Namespace) -> int:
    config = _load_config(args.config) if args.config else {}
    if config:
        _check_config_keys(config, _WALK_KEYS, args.config)
    lattice = _resolve("lattice", args.lattice, config, _parse_bool, False)
    walkers = _resolve("walkers", args.walkers, config, int, 1000)
    steps = _resolve("steps", args.steps, config, int, 10)
    n = _resolve("n", args.n, config, int, 100)
    p = _resolve("p", args.p, config, float, 0.1)
    seed = _resolve_seed(args.seed, config)
    out = _resolve("out", args.out, config, str, None)
    if out is None:
        raise UsageError("--out is required (flag or config)")
    if walkers < 1:
        raise UsageError("--walkers must be at least 1")
    if steps < 0:
        raise UsageError("--steps must be nonnegative")
    try:
        if lattice:
            paths = lattice_walk_3d(walkers, steps, seed)
            write_walk_csv(paths, out)
        else:
            network = generate(NetworkConfig(n, p, seed=split_seed(seed, 0)))
            with Path(out).open("w", newline="", encoding="ascii") as fh:
                fh.write("walker_id,step,node\n")
                for walker in range(walkers):
                    sequence = random_walk(network, 0, steps, split_seed(seed, 1, walker))
                    for step, node in enumerate(sequence):
                        fh.write(f"{walker},{step},{node}\n")
        _write_manifest(out, "walk", {
            "lattice": lattice, "walkers": walkers, "steps": steps,
            "n": n, "p": p, "seed": seed, "out": out,
        })
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    except OSError as exc:
        print(f"contagion: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"wrote {out} ({walkers} walkers, {steps} steps)")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"sweep": cmd_sweep, "metrics": cmd_metrics, "walk": cmd_walk}
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"contagion {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
