"""JSON and CSV renderings of maps, classifications, orbits and histograms.

Every JSON payload is built from plain dicts, lists, strings, numbers,
booleans and None, so ``json.loads(dumps(payload)) == payload``. Exact
scalars are rendered as strings next to a decimal approximation, and norms
through ``PVal.to_json``.
"""

import csv
import io
import json
import logging
from fractions import Fraction
from typing import Any, Optional, Union

from .errors import NearPole, PoleHit
from .exact import PVal, format_scalar, padic_val, to_decimal
from .moebius import BadPointSet, FixedPointSet, MoebiusMap, Which, alpha_beta, apply, fixed_points, k_sequence, min_period
from .padic import (
    BasinReport,
    ConditionFails,
    FixedPointCharacter,
    PadicClassification,
    PadicContext,
    SiegelReport,
    basin_check,
    classify_padic,
    fp_character,
    siegel_known,
    siegel_unique,
)
from .real import Converged, Histogram, NotConverged, RealClassification, classify_real

log = logging.getLogger(__name__)

SCHEMA = "moebius-dyn/1"

ORBIT_COLUMNS = ["n", "value_exact", "value_decimal", "pole"]
HISTOGRAM_COLUMNS = ["bin_lo", "bin_hi", "count"]


def dumps(payload: Any) -> str:
    """Deterministic JSON text (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"


def scalar_json(x: Any) -> dict:
    return {"exact": format_scalar(x), "decimal": to_decimal(x)}


def map_json(f: MoebiusMap) -> dict:
    return {
        "a": format_scalar(f.a),
        "b": format_scalar(f.b),
        "c": format_scalar(f.c),
        "pole": scalar_json(f.pole),
    }


def fixed_points_json(points: FixedPointSet) -> dict:
    return {
        "discriminant": format_scalar(points.discriminant),
        "double": points.double,
        "points": {label.value: scalar_json(x) for label, x in zip(points.labels, points.points)},
    }


def k_scan_json(f: MoebiusMap, qmax: int) -> dict:
    ks = k_sequence(f, qmax)
    return {
        "qmax": qmax,
        "min_period": min_period(f, qmax),
        "zeros": [q for q in range(2, qmax + 1) if ks[q - 1] == 0],
        "k2": format_scalar(ks[1]) if qmax >= 2 else None,
    }


def bad_points_json(points: BadPointSet) -> dict:
    return {
        "depth": points.depth,
        "points": [format_scalar(x) for x in points.points],
        "stopped": points.stopped,
    }


def real_json(result: RealClassification) -> dict:
    return {
        "verdict": result.verdict.value,
        "qmax": result.qmax,
        "period": result.period,
        "which": result.which.value if result.which else None,
        "point": scalar_json(result.point) if result.point is not None else None,
        "ratio_abs": result.ratio_abs,
        "theta": result.theta,
        "r": result.r,
    }


def limit_json(result: Union[Converged, NotConverged]) -> dict:
    if isinstance(result, Converged):
        return {
            "converged": True,
            "value": result.value,
            "n": result.n,
            "iterate": result.iterate,
            "extrapolated": result.extrapolated,
        }
    return {"converged": False, "reason": result.reason, "steps": result.steps, "last": result.last}


def histogram_json(hist: Histogram) -> dict:
    return {
        "edges": hist.edges,
        "counts": hist.counts,
        "below": hist.below,
        "above": hist.above,
        "skipped": hist.skipped,
        "n": hist.n,
        "empty_bins": hist.empty_bins,
    }


def norm_json(value: Optional[PVal]) -> Optional[dict]:
    return value.to_json() if value is not None else None


def outcome_json(outcome: Any) -> Optional[dict]:
    """JSON for the p-adic report types and ConditionFails."""
    if outcome is None:
        return None
    if isinstance(outcome, ConditionFails):
        return {
            "holds": False,
            "condition": outcome.condition,
            "clause": outcome.clause,
            "detail": outcome.detail,
        }
    if isinstance(outcome, FixedPointCharacter):
        return {
            "which": outcome.which.value,
            "point": scalar_json(outcome.point),
            "multiplier_norm": norm_json(outcome.multiplier_norm),
            "kind": outcome.kind.value,
        }
    if isinstance(outcome, SiegelReport):
        return {
            "holds": True,
            "centers": [which.value for which in outcome.centers],
            "points": [scalar_json(x) for x in outcome.points],
            "radius": norm_json(outcome.radius),
            "relation": outcome.relation,
            "separation": norm_json(outcome.separation),
            "escape_steps": outcome.escape_steps,
            "return_steps": outcome.return_steps,
        }
    if isinstance(outcome, BasinReport):
        return {
            "holds": True,
            "which": outcome.which.value,
            "point": scalar_json(outcome.point),
            "excluded": [scalar_json(x) for x in outcome.excluded],
            "sphere_radius": norm_json(outcome.sphere_radius),
        }
    raise TypeError(f"no JSON rendering for {type(outcome).__name__}")


def padic_json(result: PadicClassification) -> dict:
    return {
        "verdict": result.verdict.value,
        "p": result.p,
        "qmax": result.qmax,
        "ratio": norm_json(result.ratio),
        "period": result.period,
        "which": result.which.value if result.which else None,
        "point": scalar_json(result.point) if result.point is not None else None,
        "excluded": [scalar_json(x) for x in result.excluded],
        "siegel": outcome_json(result.siegel),
    }


def padic_report(ctx: PadicContext, qmax: int, depth: int) -> dict:
    """Every p-adic statement about ctx: characters, Siegel data, basins, verdict."""
    labels = ctx.fixed.labels
    payload = {
        "p": ctx.p,
        "alpha_norm": norm_json(ctx.norm_alpha),
        "beta_norm": norm_json(ctx.norm_beta),
        "characters": {which.value: outcome_json(fp_character(ctx, which)) for which in labels},
        "classification": padic_json(classify_padic(ctx, qmax)),
        "bad_points": bad_points_json(ctx.bad_points(depth)),
    }
    if ctx.double:
        payload["siegel"] = outcome_json(siegel_unique(ctx))
        payload["basins"] = {}
    else:
        payload["siegel"] = outcome_json(siegel_known(ctx))
        payload["basins"] = {which.value: outcome_json(basin_check(ctx, which)) for which in labels}
    return payload


def classification_report(
    f: MoebiusMap, qmax: int, p: Optional[int] = None, depth: Optional[int] = None
) -> dict:
    """Real verdict plus, with ``p``, the p-adic verdict block."""
    alpha, beta = alpha_beta(f)
    payload = {
        "schema": SCHEMA,
        "map": map_json(f),
        "discriminant": format_scalar(f.discriminant),
        "alpha": scalar_json(alpha),
        "beta": scalar_json(beta),
        "fixed_points": fixed_points_json(fixed_points(f, closed=True)),
        "k_scan": k_scan_json(f, qmax),
        "real": real_json(classify_real(f, qmax)),
    }
    if p is not None:
        ctx = PadicContext.create(f, p)
        if depth is None:
            payload["padic"] = padic_json(classify_padic(ctx, qmax))
        else:
            payload["padic"] = padic_report(ctx, qmax, depth)
    return payload


def k_table(f: MoebiusMap, qmax: int) -> list[dict]:
    """Rows (q, K_q) for q = 1..qmax with zeros flagged."""
    return [
        {"q": q, "k": format_scalar(k), "zero": k == 0}
        for q, k in enumerate(k_sequence(f, qmax), start=1)
    ]


def orbit_rows(
    f: MoebiusMap,
    x0: Union[Fraction, float],
    n: int,
    ctx: Optional[PadicContext] = None,
    which: Optional[Which] = None,
) -> list[dict]:
    """Rows for x_0 .. x_n, ending early with a flagged row at a pole.

    With ``ctx`` each row carries the p-adic valuation of x_k, or of
    x_k - x* when ``which`` names the limit of the orbit.
    """
    exact = not isinstance(x0, float)
    rows = []
    x = x0
    for k in range(n + 1):
        row = {
            "n": k,
            "value_exact": format_scalar(x) if exact else "",
            "value_decimal": float(x),
            "pole": 0,
        }
        if ctx is not None:
            v = ctx.distance(x, which) if which is not None else padic_val(x, ctx.p)
            row["padic_exponent"] = str(v.exponent)
        rows.append(row)
        if k == n:
            break
        try:
            x = apply(f, x, index=k)
        except (PoleHit, NearPole):
            log.debug("orbit row %d is the pole", k)
            row["pole"] = 1
            break
    return rows


def _csv(columns: list[str], rows: list[list]) -> str:
    output = io.StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return output.getvalue()


def orbit_csv(rows: list[dict]) -> str:
    columns = list(ORBIT_COLUMNS)
    if rows and "padic_exponent" in rows[0]:
        columns.insert(3, "padic_exponent")
    return _csv(columns, [[row[c] for c in columns] for row in rows])


def histogram_csv(hist: Histogram) -> str:
    return _csv(
        HISTOGRAM_COLUMNS,
        [[lo, hi, count] for lo, hi, count in zip(hist.edges, hist.edges[1:], hist.counts)],
    )


def k_table_csv(rows: list[dict]) -> str:
    return _csv(["q", "k", "zero"], [[row["q"], row["k"], int(row["zero"])] for row in rows])
