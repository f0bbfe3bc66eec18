"""Command-line entry point for moebius-dyn."""

import argparse
import io
import itertools
import logging
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from rich.console import Console

from . import __version__
from .config import Config, load_config
from .errors import ConfigError, InvalidParametersError, InvalidPrimeError, InvalidRationalError
from .exact import parse_rational, require_prime
from .moebius import MoebiusMap, bad_points
from .padic import PadicContext, PadicVerdict, classify_padic
from .real import RealVerdict, classify_real, density_histogram, limit_of_orbit
from .report import (
    SCHEMA,
    bad_points_json,
    classification_report,
    dumps,
    histogram_csv,
    histogram_json,
    k_table,
    k_table_csv,
    limit_json,
    map_json,
    orbit_csv,
    orbit_rows,
    padic_json,
    padic_report,
    real_json,
)
from .ui import (
    configure_logging,
    create_progress,
    display_classification,
    display_histogram,
    display_k_table,
    display_padic,
    print_error,
    print_info,
    print_success,
    print_warning,
)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_POLE = 3
EXIT_MISMATCH = 4

VALIDATION_ERRORS = (ConfigError, InvalidParametersError, InvalidPrimeError, InvalidRationalError)


class CommandError(Exception):
    """A command refuses to run; carries the exit code."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _add_map_arguments(cmd: argparse.ArgumentParser, prime_required: bool = False) -> None:
    cmd.add_argument("-a", required=True, help="Parameter a (integer or n/m)")
    cmd.add_argument("-b", required=True, help="Parameter b, nonzero")
    cmd.add_argument("-c", required=True, help="Parameter c, different from a*b")
    cmd.add_argument("-p", type=int, required=prime_required, default=None, help="Prime for the p-adic block")
    cmd.add_argument("--qmax", type=int, default=None, help="Periodicity scan bound")
    cmd.add_argument("-o", "--output", type=Path, default=None, help="Write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per report."""
    parser = argparse.ArgumentParser(
        prog="moebius-dyn",
        description="Dynamics of f(x) = (x + a)/(bx + c) over the reals and the p-adic numbers.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, default=None, help="Path to config.json")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    classify_cmd = sub.add_parser("classify", help="Classify real (and p-adic) behaviour")
    _add_map_arguments(classify_cmd)
    classify_cmd.add_argument("--tol", type=float, default=None, help="Tolerance of the numeric limit check")
    classify_cmd.add_argument("--format", choices=["json", "text"], default="json")
    classify_cmd.add_argument("--sweep", type=int, default=None, metavar="R", help="Classify the integer grid a±R, b±R, c±R")

    iterate_cmd = sub.add_parser("iterate", help="Write an orbit as CSV")
    _add_map_arguments(iterate_cmd)
    iterate_cmd.add_argument("-x", required=True, help="Start point: n/m for exact, decimal for float")
    iterate_cmd.add_argument("-n", type=int, default=None, help="Number of steps")
    iterate_cmd.add_argument("--format", choices=["csv", "json"], default="csv")

    periods_cmd = sub.add_parser("periods", help="Tabulate K_q")
    _add_map_arguments(periods_cmd)
    periods_cmd.add_argument("--format", choices=["text", "csv", "json"], default="text")

    padic_cmd = sub.add_parser("padic", help="Full p-adic report")
    _add_map_arguments(padic_cmd, prime_required=True)
    padic_cmd.add_argument("--format", choices=["json", "text"], default="json")

    density_cmd = sub.add_parser("density", help="Orbit histogram for dense maps")
    _add_map_arguments(density_cmd)
    density_cmd.add_argument("-x", type=float, default=None, help="Start point")
    density_cmd.add_argument("-n", type=int, default=None, help="Number of orbit points")
    density_cmd.add_argument("--bins", type=int, default=None)
    density_cmd.add_argument("--lo", type=float, default=None)
    density_cmd.add_argument("--hi", type=float, default=None)
    density_cmd.add_argument("--format", choices=["csv", "json", "text"], default="csv")

    report_cmd = sub.add_parser("report", help="Combined real and p-adic report")
    _add_map_arguments(report_cmd)
    report_cmd.add_argument("--tol", type=float, default=None)
    report_cmd.add_argument("--format", choices=["text", "json"], default="text")

    return parser


def _pick(value, default):
    return default if value is None else value


def parse_map(args: argparse.Namespace, config: Config) -> MoebiusMap:
    """Exact map from the -a/-b/-c strings.

    Raises:
        InvalidRationalError: A parameter is not an integer or n/m.
        InvalidParametersError: b = 0 or c = ab.
    """
    f = MoebiusMap(parse_rational(args.a), parse_rational(args.b), parse_rational(args.c), config.pole_guard)
    log.debug("parsed %s", f)
    return f


def parse_start(text: str) -> Union[Fraction, float]:
    """Exact start point for "n" / "n/m", float for decimals."""
    try:
        return parse_rational(text)
    except InvalidRationalError:
        pass
    try:
        return float(text)
    except ValueError:
        raise InvalidRationalError(f"cannot read start point {text!r}") from None


def _prime(args: argparse.Namespace) -> Optional[int]:
    if args.p is None:
        return None
    return require_prime(args.p)


def _qmax(args: argparse.Namespace, config: Config) -> int:
    qmax = _pick(args.qmax, config.qmax)
    if qmax < 2:
        raise InvalidParametersError(f"qmax must be at least 2, got {qmax}")
    return qmax


def _render(draw, *payload) -> str:
    buffer = io.StringIO()
    draw(*payload, Console(file=buffer, width=100))
    return buffer.getvalue()


def emit(text: str, output: Optional[Path]) -> None:
    """Write a payload to ``output`` or stdout."""
    if output is None:
        sys.stdout.write(text)
        return
    output.write_text(text)
    print_success(f"Wrote {output}")


def _numeric_limit(f: MoebiusMap, config: Config, tol: Optional[float]) -> dict:
    tol = _pick(tol, config.tolerance)
    if tol <= 0:
        raise InvalidParametersError(f"tolerance must be positive, got {tol}")
    limit = limit_of_orbit(f, config.orbit_start, tol, config.max_iterations)
    return {"x0": config.orbit_start, **limit_json(limit)}


def _sweep_grid(f: MoebiusMap, radius: int) -> list[MoebiusMap]:
    offsets = range(-radius, radius + 1)
    maps = []
    for da, db, dc in itertools.product(offsets, repeat=3):
        try:
            maps.append(MoebiusMap(f.a + da, f.b + db, f.c + dc, f.pole_guard))
        except InvalidParametersError:
            continue
    return maps


def _sweep_entry(g: MoebiusMap, qmax: int, p: Optional[int]) -> dict:
    entry = {"map": map_json(g), "real": real_json(classify_real(g, qmax))}
    if p is not None:
        entry["padic"] = padic_json(classify_padic(PadicContext.create(g, p), qmax))
    return entry


def run_sweep(f: MoebiusMap, radius: int, qmax: int, p: Optional[int], workers: int) -> list[dict]:
    """Classify every valid integer-offset neighbour of f on a thread pool.

    Args:
        f: Center of the grid.
        radius: Offsets run over -radius..radius in each parameter.
        qmax: Periodicity scan bound.
        p: Optional prime for the p-adic verdicts.
        workers: Thread count.

    Returns:
        One entry per valid map, in grid order.
    """
    if radius < 0:
        raise InvalidParametersError("sweep radius must be non-negative")
    maps = _sweep_grid(f, radius)
    results: list[Optional[dict]] = [None] * len(maps)

    with create_progress() as progress:
        task = progress.add_task("Classifying grid...", total=len(maps))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_sweep_entry, g, qmax, p): i for i, g in enumerate(maps)}
            for future in as_completed(futures):
                results[futures[future]] = future.result()
                progress.advance(task)

    log.debug("sweep of radius %d classified %d maps", radius, len(maps))
    return results


def cmd_classify(args: argparse.Namespace, config: Config) -> int:
    """Real verdict, optional p-adic block, numeric confirmation of convergence."""
    f = parse_map(args, config)
    qmax = _qmax(args, config)
    p = _prime(args)

    if args.sweep is not None:
        payload = run_sweep(f, args.sweep, qmax, p, config.sweep_workers)
        emit(dumps(payload), args.output)
        return EXIT_OK

    payload = classification_report(f, qmax, p)
    if payload["real"]["verdict"] == RealVerdict.CONVERGES.value:
        payload["numeric_limit"] = _numeric_limit(f, config, args.tol)

    if args.format == "text":
        emit(_render(display_classification, payload), args.output)
    else:
        emit(dumps(payload), args.output)
    return EXIT_OK


def cmd_iterate(args: argparse.Namespace, config: Config) -> int:
    """Orbit table, exact for rational starts and float otherwise."""
    f = parse_map(args, config)
    x0 = parse_start(args.x)
    n = _pick(args.n, config.iterations)
    if n < 0:
        raise InvalidParametersError("n must be non-negative")
    p = _prime(args)

    if isinstance(x0, float):
        if p is not None:
            raise InvalidRationalError("p-adic columns need an exact start point")
        f = f.to_numeric()
        if abs(f.b * x0 + f.c) < f.pole_guard:
            raise CommandError(EXIT_POLE, f"start point {x0} is at the pole {f.pole}")
    elif x0 == f.pole:
        raise CommandError(EXIT_POLE, f"start point {x0} is the pole")

    ctx = which = None
    if p is not None:
        ctx = PadicContext.create(f, p)
        verdict = classify_padic(ctx, _qmax(args, config))
        if verdict.verdict is PadicVerdict.CONVERGES:
            which = verdict.which

    rows = orbit_rows(f, x0, n, ctx, which)
    if rows[-1]["pole"]:
        print_warning(f"orbit reaches the pole at step {rows[-1]['n']}")

    if args.format == "json":
        emit(dumps({"schema": SCHEMA, "map": map_json(f), "rows": rows}), args.output)
    else:
        emit(orbit_csv(rows), args.output)
    return EXIT_OK


def cmd_periods(args: argparse.Namespace, config: Config) -> int:
    """K_q table with zeros highlighted."""
    f = parse_map(args, config)
    rows = k_table(f, _qmax(args, config))

    if args.format == "csv":
        emit(k_table_csv(rows), args.output)
    elif args.format == "json":
        zeros = [row["q"] for row in rows if row["zero"] and row["q"] >= 2]
        payload = {"schema": SCHEMA, "map": map_json(f), "rows": rows, "min_period": zeros[0] if zeros else None}
        emit(dumps(payload), args.output)
    else:
        emit(_render(display_k_table, rows), args.output)
    return EXIT_OK


def cmd_padic(args: argparse.Namespace, config: Config) -> int:
    """Characters, Siegel data, basins and the p-adic verdict."""
    f = parse_map(args, config)
    ctx = PadicContext.create(f, _prime(args))
    payload = {
        "schema": SCHEMA,
        "map": map_json(f),
        "padic": padic_report(ctx, _qmax(args, config), config.bad_point_depth),
    }

    if args.format == "text":
        emit(_render(display_padic, payload["padic"]), args.output)
    else:
        emit(dumps(payload), args.output)
    return EXIT_OK


def cmd_density(args: argparse.Namespace, config: Config) -> int:
    """Histogram of a dense orbit; refuses maps whose orbits are not dense."""
    f = parse_map(args, config)
    qmax = _qmax(args, config)
    verdict = classify_real(f, qmax)
    if not verdict.is_dense:
        raise CommandError(
            EXIT_MISMATCH,
            f"orbits are not dense (verdict {verdict.verdict.value}); density needs D < 0 and no period up to {qmax}",
        )

    n = _pick(args.n, config.density_iterations)
    bins = _pick(args.bins, config.histogram.bins)
    lo = _pick(args.lo, config.histogram.lo)
    hi = _pick(args.hi, config.histogram.hi)
    if n < 0 or bins < 1 or not lo < hi:
        raise InvalidParametersError("density needs n >= 0, bins >= 1 and lo < hi")

    hist = density_histogram(f, _pick(args.x, config.orbit_start), n, bins, lo, hi)
    if hist.empty_bins:
        print_info(f"{hist.empty_bins} of {len(hist.counts)} bins are empty")

    if args.format == "json":
        emit(dumps({"schema": SCHEMA, "map": map_json(f), "histogram": histogram_json(hist)}), args.output)
    elif args.format == "text":
        emit(_render(display_histogram, histogram_json(hist)), args.output)
    else:
        print_info(f"below {hist.below}, above {hist.above}, skipped {hist.skipped}")
        emit(histogram_csv(hist), args.output)
    return EXIT_OK


def cmd_report(args: argparse.Namespace, config: Config) -> int:
    """Everything known about f: real and p-adic verdicts, bad points, numeric limit."""
    f = parse_map(args, config)
    p = _prime(args)
    payload = classification_report(f, _qmax(args, config), p, depth=config.bad_point_depth)
    payload["bad_points"] = bad_points_json(bad_points(f, config.bad_point_depth))
    if payload["real"]["verdict"] == RealVerdict.CONVERGES.value:
        payload["numeric_limit"] = _numeric_limit(f, config, args.tol)

    if args.format == "json":
        emit(dumps(payload), args.output)
    else:
        emit(_render(display_classification, payload), args.output)
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "iterate": cmd_iterate,
    "periods": cmd_periods,
    "padic": cmd_padic,
    "density": cmd_density,
    "report": cmd_report,
}


def main(argv: Optional[list[str]] = None) -> int:
    """Run moebius-dyn.

    Args:
        argv: Arguments without the program name; None reads sys.argv.

    Returns:
        Exit code: 0 success, 2 invalid input, 3 start point at the pole,
        4 command does not apply to the map's verdict.
    """
    args = build_parser().parse_args(argv)

    try:
        config = load_config(args.config)
    except ConfigError as e:
        configure_logging("DEBUG" if args.verbose else "WARNING")
        print_error(f"Failed to load config: {e}")
        return EXIT_INVALID

    configure_logging("DEBUG" if args.verbose else config.log_level)

    try:
        return COMMANDS[args.command](args, config)
    except VALIDATION_ERRORS as e:
        print_error(str(e))
        return EXIT_INVALID
    except CommandError as e:
        print_error(str(e))
        return e.code


if __name__ == "__main__":
    sys.exit(main())
