"""Command-line interface for graph indices, oracles and experiments."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, NoReturn, Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.progress import BarColumn, MofNCompleteColumn, Progress, SpinnerColumn, TextColumn

from app import generators, oracles
from app.config import settings
from app.errors import ConfigError, GraphIndexError, InvalidParameterError, require_probability, require_seed
from app.experiment_config import load_experiment_config
from app.graph import Graph, load_graph, save_graph
from app.montecarlo import ExperimentRunner, estimate_clustering_moments, write_csv
from app.report import (
    format_float,
    print_experiment_summary,
    print_graph_stats,
    print_moments,
    summarize_graph,
)
from app.storage import atomic_write
from app.types import BinomialParams, ModelKind, ModelSpec

logger = logging.getLogger(__name__)

GENERATE_MODELS = [kind.value for kind in ModelKind] + ["polygons", "clique-triangles", "clique-null"]
PARAMS_MODELS = ["ws", "ba", "rr"]


def _require(args: argparse.Namespace, name: str, context: str) -> Any:
    value = getattr(args, name)
    if value is None:
        raise InvalidParameterError(f"{context} requires --{name.replace('_', '-')}", name)
    return value


def _parse_sizes(text: str) -> list[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise InvalidParameterError(f"expected comma-separated integers, got {text!r}", "sizes") from None


def _binomial(args: argparse.Namespace, context: str) -> BinomialParams:
    trials = _require(args, "m", context)
    if trials < 0:
        raise InvalidParameterError(f"m must be >= 0, got {trials}", "m")
    p = require_probability(_require(args, "p", context), "p")
    return BinomialParams(trials=trials, success_prob=p)


def build_graph(args: argparse.Namespace) -> Graph:
    """Sample or construct the graph requested by `generate` flags."""
    require_seed(args.seed)
    model = args.model
    if model == "polygons":
        return generators.disjoint_polygons(_parse_sizes(_require(args, "sizes", model)))
    if model == "clique-triangles":
        return generators.clique_plus_triangles(_require(args, "n", model))
    if model == "clique-null":
        return generators.clique_union_null(_require(args, "m", model))

    kind = ModelKind(model)
    n = _require(args, "n", model)
    if kind in (ModelKind.ERDOS_RENYI, ModelKind.TWO_PHASE):
        spec = ModelSpec(kind, n, p=_require(args, "p", model))
    elif kind is ModelKind.WATTS_STROGATZ:
        beta = _require(args, "beta", model)
        if args.k is None and args.p_star is not None:
            spec = generators.resolve_model(kind, n, args.p_star, beta)
        else:
            spec = ModelSpec(kind, n, k=_require(args, "k", model), beta=beta)
    else:
        field = "m" if kind is ModelKind.BARABASI_ALBERT else "d"
        if getattr(args, field) is None and args.p_star is not None:
            spec = generators.resolve_model(kind, n, args.p_star)
        else:
            spec = ModelSpec(kind, n, **{field: _require(args, field, model)})
    return generators.sample(spec, args.seed)


def cmd_generate(args: argparse.Namespace, console: Console, err_console: Console) -> None:
    graph = build_graph(args)
    save_graph(graph, Path(args.out))
    density = format_float(graph.edge_density()) if graph.node_count >= 2 else "undefined"
    console.print(f"n: {graph.node_count}", soft_wrap=True)
    console.print(f"m: {graph.edge_count}", soft_wrap=True)
    console.print(f"density: {density}", soft_wrap=True)


def cmd_stats(args: argparse.Namespace, console: Console, err_console: Console) -> None:
    graph = load_graph(Path(args.in_path))
    print_graph_stats(summarize_graph(graph, args.alpha), console)


def _oracle_table() -> dict[str, Callable[[argparse.Namespace], float]]:
    def n_of(args: argparse.Namespace, name: str) -> int:
        return int(_require(args, "n", name))

    def p_of(args: argparse.Namespace, name: str) -> float:
        return float(_require(args, "p", name))

    return {
        "edi2": lambda a: oracles.expected_di2_er(n_of(a, "edi2"), p_of(a, "edi2")),
        "edi1": lambda a: oracles.expected_di1_er(n_of(a, "edi1"), p_of(a, "edi1")),
        "edi1-half": lambda a: oracles.expected_di1_er_half(n_of(a, "edi1-half")),
        "edi1-upper": lambda a: oracles.expected_di1_upper_bound(n_of(a, "edi1-upper"), p_of(a, "edi1-upper")),
        "degree-gap": lambda a: oracles.expected_degree_gap_er(n_of(a, "degree-gap"), p_of(a, "degree-gap")),
        "degree-gap-squared": lambda a: oracles.expected_degree_gap_squared_er(
            n_of(a, "degree-gap-squared"), p_of(a, "degree-gap-squared")
        ),
        "normalized-di2": lambda a: oracles.normalized_di2_er(p_of(a, "normalized-di2")),
        "mad-binomial": lambda a: oracles.mean_abs_diff_binomial(_binomial(a, "mad-binomial")),
        "mad-binomial-half": lambda a: oracles.mean_abs_diff_binomial_half(_require(a, "m", "mad-binomial-half")),
        "mad-binomial-asymptotic": lambda a: oracles.mean_abs_diff_binomial_asymptotic(
            _binomial(a, "mad-binomial-asymptotic")
        ),
        "local-clustering": lambda a: oracles.expected_local_clustering_er(
            n_of(a, "local-clustering"), p_of(a, "local-clustering")
        ),
        "ci2-limit": lambda a: oracles.ci2_empirical_limit(p_of(a, "ci2-limit")),
        "eci1-two-phase": lambda a: oracles.expected_ci1_two_phase(
            n_of(a, "eci1-two-phase"), p_of(a, "eci1-two-phase")
        ),
        "brute-force": lambda a: oracles.brute_force_er_expectation(
            n_of(a, "brute-force"), p_of(a, "brute-force"), oracles.STATISTICS[a.statistic]
        ).value,
    }


ORACLES = _oracle_table()


def cmd_oracle(args: argparse.Namespace, console: Console, err_console: Console) -> None:
    console.print(format_float(ORACLES[args.name](args)), soft_wrap=True)


def cmd_params(args: argparse.Namespace, console: Console, err_console: Console) -> None:
    match = {
        "ws": generators.ws_k_for_density,
        "ba": generators.ba_m_for_density,
        "rr": generators.rr_d_for_density,
    }[args.model]
    console.print(str(match(args.n, args.p_star)), soft_wrap=True)


def cmd_experiment(args: argparse.Namespace, console: Console, err_console: Console) -> None:
    config = load_experiment_config(Path(args.config))
    runner = ExperimentRunner(workers=args.threads)
    cells = runner.plan(config)

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        console=err_console,
        transient=True,
    ) as progress:
        task = progress.add_task("Running cells...", total=len(cells))

        def advance(cell: Any) -> None:
            progress.update(task, advance=1, description=f"Finished {cell}")

        rows = runner.run_cells(config, cells, on_cell=advance)

    with atomic_write(Path(args.out)) as stream:
        write_csv(rows, stream)

    print_experiment_summary(rows, err_console)
    err_console.print(f"Wrote {len(rows)} rows to {args.out}", soft_wrap=True)


def cmd_moments(args: argparse.Namespace, console: Console, err_console: Console) -> None:
    print_moments(
        estimate_clustering_moments(args.n, args.p, args.replications, args.seed),
        console,
    )


class CommandParser(argparse.ArgumentParser):
    """Parser whose usage errors print a single `error: <message>` line."""

    def error(self, message: str) -> NoReturn:
        self.exit(2, f"error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    parser = CommandParser(
        prog="graph-indices",
        description="Degree and clustering indices of random graphs",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    generate = commands.add_parser("generate", help="Sample or construct a graph and write its edge list")
    generate.add_argument("--model", required=True, choices=GENERATE_MODELS)
    generate.add_argument("--n", type=int, help="Node count")
    generate.add_argument("--p", type=float, help="Edge (or isolation) probability for er and two-phase")
    generate.add_argument("--k", type=int, help="Ring neighbors for ws")
    generate.add_argument("--beta", type=float, help="Rewiring probability for ws")
    generate.add_argument("--m", type=int, help="Attachment count for ba, half size for clique-null")
    generate.add_argument("--d", type=int, help="Degree for rr")
    generate.add_argument("--p-star", type=float, help="Density target when k, m or d is omitted")
    generate.add_argument("--sizes", help="Comma-separated polygon sizes")
    generate.add_argument("--seed", type=int, default=settings.default_seed)
    generate.add_argument("--out", default="graph.txt", help="Output path (default: graph.txt)")
    generate.set_defaults(handler=cmd_generate)

    stats = commands.add_parser("stats", help="Print indices and clustering of an edge-list file")
    stats.add_argument("--in", dest="in_path", required=True, help="Edge-list file")
    stats.add_argument("--alpha", type=float, nargs="+", default=[1.0, 2.0], help="Exponents (default: 1 2)")
    stats.set_defaults(handler=cmd_stats)

    oracle = commands.add_parser("oracle", help="Evaluate a closed-form expectation")
    oracle.add_argument("name", choices=sorted(ORACLES))
    oracle.add_argument("--n", type=int)
    oracle.add_argument("--p", type=float)
    oracle.add_argument("--m", type=int, help="Binomial trials")
    oracle.add_argument("--statistic", choices=sorted(oracles.STATISTICS), default="di1")
    oracle.set_defaults(handler=cmd_oracle)

    params = commands.add_parser("params", help="Density-matched model parameter")
    params.add_argument("--model", required=True, choices=PARAMS_MODELS)
    params.add_argument("--n", type=int, required=True)
    params.add_argument("--p-star", type=float, required=True)
    params.set_defaults(handler=cmd_params)

    experiment = commands.add_parser("experiment", help="Run a Monte Carlo experiment grid")
    experiment.add_argument("--config", required=True, help="Experiment configuration file")
    experiment.add_argument("--out", default="results.csv", help="CSV path (default: results.csv)")
    experiment.add_argument("--threads", type=int, default=None, help="Worker processes (default: GRAPH_INDEX_THREADS)")
    experiment.set_defaults(handler=cmd_experiment)

    moments = commands.add_parser("moments", help="Monte Carlo moments of C(0) in G(n, p)")
    moments.add_argument("--n", type=int, required=True)
    moments.add_argument("--p", type=float, required=True)
    moments.add_argument("--replications", type=int, default=settings.default_replications)
    moments.add_argument("--seed", type=int, default=settings.default_seed)
    moments.set_defaults(handler=cmd_moments)

    return parser


def _error_message(exc: BaseException) -> str:
    if isinstance(exc, InvalidParameterError) and not isinstance(exc, ConfigError) and exc.parameter:
        return f"--{exc.parameter.replace('_', '-')}: {exc}"
    return str(exc)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command.

    Returns:
        0 on success, 1 when the computation failed
    """
    console = Console(highlight=False)
    err_console = Console(stderr=True, highlight=False)
    logging.basicConfig(
        level=settings.log_level.upper(),
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
    )

    args = build_parser().parse_args(argv)
    if getattr(args, "threads", None) is not None and args.threads < 1:
        err_console.print(f"error: --threads must be >= 1, got {args.threads}", markup=False, soft_wrap=True)
        return 1

    try:
        args.handler(args, console, err_console)
    except (GraphIndexError, OSError) as exc:
        err_console.print(f"error: {_error_message(exc)}", markup=False, soft_wrap=True)
        return 1
    return 0


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
