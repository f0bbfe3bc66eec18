"""Terminal UI helpers for tables, status lines, logging and progress display."""

import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn
from rich.table import Table

# Shared console instance; stdout stays free for report payloads
console = Console(stderr=True)


def configure_logging(level: str = "WARNING") -> None:
    """Route log records through rich on stderr.

    Args:
        level: Logging level name.
    """
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def _exact(scalar: Optional[dict]) -> str:
    if scalar is None:
        return "-"
    if scalar["decimal"] is None:
        return scalar["exact"]
    return f"{scalar['exact']}  [dim]≈ {scalar['decimal']:.10g}[/dim]"


def _norm(norm: Optional[dict]) -> str:
    if norm is None:
        return "-"
    return f"{norm['norm']}  [dim](v = {norm['exponent']})[/dim]"


def display_classification(payload: dict, out: Console) -> None:
    """Render a classification report as tables.

    Args:
        payload: Output of report.classification_report.
        out: Console to print on.
    """
    f = payload["map"]
    table = Table(title=f"f(x) = (x + {f['a']})/({f['b']}x + {f['c']})")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="white")

    table.add_row("pole", _exact(f["pole"]))
    table.add_row("D", payload["discriminant"])
    table.add_row("alpha", _exact(payload["alpha"]))
    table.add_row("beta", _exact(payload["beta"]))
    for label, point in payload["fixed_points"]["points"].items():
        table.add_row(label, _exact(point))

    scan = payload["k_scan"]
    period = scan["min_period"]
    table.add_row("K_q scan", f"q <= {scan['qmax']}: " + (f"K_{period} = 0" if period else "no zero"))

    real = payload["real"]
    verdict = real["verdict"]
    if real["period"]:
        verdict += f" (q = {real['period']})"
    elif real["point"]:
        verdict += f" {real['which']} = {real['point']['exact']}"
    table.add_row("real verdict", f"[bold]{verdict}[/bold]")
    if real["theta"] is not None:
        table.add_row("theta, r", f"{real['theta']:.12g}, {real['r']:.12g}")

    out.print(table)

    if "padic" in payload:
        display_padic(payload["padic"], out)


def display_padic(padic: dict, out: Console) -> None:
    """Render a p-adic verdict block or a full p-adic report."""
    classification = padic.get("classification", padic)
    table = Table(title=f"p = {classification['p']}")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="white")

    table.add_row("|alpha/beta|", _norm(classification["ratio"]))
    verdict = classification["verdict"]
    if classification["period"]:
        verdict += f" (q = {classification['period']})"
    elif classification["which"]:
        verdict += f" {classification['which']}"
    table.add_row("p-adic verdict", f"[bold]{verdict}[/bold]")

    for label, character in padic.get("characters", {}).items():
        table.add_row(f"f'({label})", f"{_norm(character['multiplier_norm'])} {character['kind']}")

    siegel = padic.get("siegel", classification.get("siegel"))
    if siegel:
        if siegel["holds"]:
            relation = f", disks {siegel['relation']}" if siegel["relation"] else ""
            table.add_row("Siegel radius", _norm(siegel["radius"]) + relation)
        else:
            table.add_row("Siegel", f"[yellow]{siegel['condition']} clause {siegel['clause']} fails[/yellow]")

    for label, basin in padic.get("basins", {}).items():
        if basin["holds"]:
            table.add_row(f"basin({label})", f"all but pole and other point; sphere {_norm(basin['sphere_radius'])}")
        else:
            table.add_row(f"basin({label})", f"[yellow]{basin['condition']} clause {basin['clause']} fails[/yellow]")

    if "bad_points" in padic:
        points = padic["bad_points"]["points"]
        table.add_row("bad points", ", ".join(points))

    out.print(table)


def display_k_table(rows: list[dict], out: Console) -> None:
    """Show K_q for each q with zeros highlighted.

    Args:
        rows: Output of report.k_table.
        out: Console to print on.
    """
    table = Table(title="K_q")
    table.add_column("q", justify="right", style="cyan", width=4)
    table.add_column("K_q", style="white")

    for row in rows:
        value = f"[bold red]{row['k']}[/bold red]" if row["zero"] else row["k"]
        table.add_row(str(row["q"]), value)

    out.print(table)
    zeros = [row["q"] for row in rows if row["zero"] and row["q"] >= 2]
    if zeros:
        out.print(f"[green]minimal period {zeros[0]}[/green]")
    else:
        out.print(f"[dim]no K_q zero for q <= {len(rows)}[/dim]")


def display_histogram(hist: dict, out: Console) -> None:
    """Show histogram counts with the overflow sinks."""
    table = Table(title="Orbit density")
    table.add_column("bin", justify="right", style="cyan")
    table.add_column("count", justify="right", style="magenta")

    edges = hist["edges"]
    for lo, hi, count in zip(edges, edges[1:], hist["counts"]):
        table.add_row(escape(f"[{lo:.3g}, {hi:.3g})"), str(count))

    out.print(table)
    out.print(
        f"[dim]below {hist['below']}, above {hist['above']}, skipped {hist['skipped']}, "
        f"empty bins {hist['empty_bins']} of {len(hist['counts'])}[/dim]"
    )


def print_success(message: str) -> None:
    """Print a success message."""
    console.print(f"[green]{escape(message)}[/green]")


def print_error(message: str) -> None:
    """Print an error message."""
    console.print(f"[red]{escape(message)}[/red]")


def print_warning(message: str) -> None:
    """Print a warning message."""
    console.print(f"[yellow]{escape(message)}[/yellow]")


def print_info(message: str) -> None:
    """Print an info message."""
    console.print(f"[blue]{escape(message)}[/blue]")


def create_progress() -> Progress:
    """Create a progress bar for long operations."""
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        console=console,
    )
