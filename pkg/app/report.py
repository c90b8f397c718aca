"""Report generation and output formatting."""

from __future__ import annotations

from collections.abc import Sequence

from rich.console import Console
from rich.table import Table

from app.graph import Graph
from app.indices import clustering_index, degree_index
from app.types import Alpha, ClusteringMoments, GraphStats, SummaryRow


def format_float(value: float) -> str:
    """Format a real with 17 significant digits."""
    return f"{value:.17g}"


def summarize_graph(graph: Graph, alphas: Sequence[float]) -> GraphStats:
    """
    Compute the statistics printed by `stats`.

    Args:
        graph: Graph to summarize
        alphas: Exponents for DI and CI

    Returns:
        GraphStats; indices are keyed "DI<alpha>" and "CI<alpha>"
    """
    n = graph.node_count
    if n == 0:
        return GraphStats(n=0, m=0)

    indices: dict[str, float] = {}
    if n >= 2:
        for alpha in alphas:
            label = f"{Alpha.of(alpha).value:g}"
            indices[f"DI{label}"] = degree_index(graph, alpha)
            indices[f"CI{label}"] = clustering_index(graph, alpha)

    clustering = graph.local_clusterings()
    return GraphStats(
        n=n,
        m=graph.edge_count,
        density=graph.edge_density() if n >= 2 else None,
        indices=indices,
        clustering_min=float(clustering.min()),
        clustering_max=float(clustering.max()),
        clustering_mean=graph.average_clustering(),
    )


def print_graph_stats(stats: GraphStats, console: Console) -> None:
    """Print graph statistics, one labelled value per line."""
    console.print(f"[bold]n:[/bold] {stats.n}")
    console.print(f"[bold]m:[/bold] {stats.m}")
    density = "undefined" if stats.density is None else format_float(stats.density)
    console.print(f"[bold]density:[/bold] {density}")

    for label, value in stats.indices.items():
        console.print(f"[bold]{label}:[/bold] {format_float(value)}")

    console.print(f"[bold]clustering min:[/bold] {format_float(stats.clustering_min)}")
    console.print(f"[bold]clustering max:[/bold] {format_float(stats.clustering_max)}")
    console.print(f"[bold]clustering mean:[/bold] {format_float(stats.clustering_mean)}")


def print_moments(moments: ClusteringMoments, console: Console) -> None:
    """Print clustering-coefficient moments for node 0 (and node 1 for the cross moment)."""
    console.print(f"[bold]n:[/bold] {moments.n}  [bold]p:[/bold] {format_float(moments.p)}  "
                  f"[bold]replications:[/bold] {moments.replications}")
    console.print(f"[bold]E[C(0)]:[/bold] {format_float(moments.mean)} "
                  f"(stderr {format_float(moments.mean_stderr)})")
    console.print(f"[bold]E[C(0)^2]:[/bold] {format_float(moments.second_moment)}")
    console.print(f"[bold]Var C(0):[/bold] {format_float(moments.variance)}")
    console.print(f"[bold]E[C(0)C(1)]:[/bold] {format_float(moments.cross_moment)}")


def print_experiment_summary(rows: Sequence[SummaryRow], console: Console) -> None:
    """
    Print a table of experiment rows.

    Args:
        rows: Summary rows in output order
        console: Destination console
    """
    console.print("\n[bold cyan]═══ EXPERIMENT SUMMARY ═══[/bold cyan]\n")

    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Model", style="cyan")
    table.add_column("n", justify="right")
    table.add_column("p*", justify="right")
    table.add_column("Index", style="yellow")
    table.add_column("Mean", justify="right")
    table.add_column("Stderr", justify="right")

    for row in rows:
        table.add_row(
            row.model,
            str(row.n),
            f"{row.p_star:g}",
            row.index_spec.label,
            f"{row.mean:.6g}",
            f"{row.stderr:.3g}",
        )

    console.print(table)
    console.print(f"{len(rows)} rows, {rows[0].replications if rows else 0} replications each")
