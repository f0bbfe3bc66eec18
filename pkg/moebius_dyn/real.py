"""Real dynamics: periodicity, convergence to a fixed point, or dense orbits."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from .errors import InvalidRationalError, NearPole, WrongCaseError
from .moebius import DEFAULT_QMAX, MoebiusMap, Value, Which, apply, fixed_points, min_period

log = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_ITERATIONS = 100_000


class RealVerdict(str, Enum):
    PERIODIC = "globally-periodic"
    CONVERGES = "converges-to"
    DENSE = "dense"


@dataclass(frozen=True)
class RealClassification:
    """Fate of real orbits of f outside the bad-point set.

    ``period`` is set for PERIODIC, ``point``/``which`` for CONVERGES,
    ``theta``/``r`` whenever D < 0. ``ratio_abs`` records the exact
    comparison of |alpha/beta| with 1 (">1" or "<1") when D > 0.
    """

    verdict: RealVerdict
    discriminant: Value
    qmax: int
    period: Optional[int] = None
    point: Optional[Value] = None
    which: Optional[Which] = None
    ratio_abs: Optional[str] = None
    theta: Optional[float] = None
    r: Optional[float] = None

    @property
    def is_dense(self) -> bool:
        return self.verdict is RealVerdict.DENSE


def theta_of(f: MoebiusMap) -> tuple[float, float]:
    """Rotation angle theta = arg(alpha) and modulus r = |alpha| = sqrt(c - ab).

    atan2 puts theta in (0, pi), which covers c + 1 < 0 (theta > pi/2) and
    c = -1 (theta = pi/2).

    Raises:
        WrongCaseError: D >= 0.
    """
    d = f.discriminant
    if d >= 0:
        raise WrongCaseError(f"theta needs D < 0, got D = {d}")
    theta = math.atan2(math.sqrt(-float(d)), float(1 + f.c))
    r = math.sqrt(float(f.determinant))
    return theta, r


def rotation_residual(theta: float, q: int) -> float:
    """Distance of q*theta from the nearest multiple of pi."""
    turns = q * theta / math.pi
    return abs(turns - round(turns)) * math.pi


def classify_real(f: MoebiusMap, qmax: int = DEFAULT_QMAX) -> RealClassification:
    """Decide periodic / convergent / dense behaviour from exact parameters.

    The K_q scan runs first. Otherwise the sign of D picks the case; for
    D > 0, |alpha|^2 - |beta|^2 = (1 + c)*sqrt(D), so the larger multiplier
    is alpha exactly when 1 + c > 0 and orbits converge to x1.

    Raises:
        InvalidRationalError: f has float parameters.
    """
    if not f.is_exact:
        raise InvalidRationalError("real classification needs exact parameters")

    d = f.discriminant
    theta = r = None
    if d < 0:
        theta, r = theta_of(f)

    period = min_period(f, qmax)
    if period is not None:
        return RealClassification(RealVerdict.PERIODIC, d, qmax, period=period, theta=theta, r=r)

    points = fixed_points(f)
    if d == 0:
        return RealClassification(
            RealVerdict.CONVERGES, d, qmax, point=points.points[0], which=Which.UNIQUE
        )
    if d > 0:
        # 1 + c = 0 is K_2 = 0, caught by the scan
        if 1 + f.c > 0:
            return RealClassification(
                RealVerdict.CONVERGES, d, qmax, point=points.point(Which.X1), which=Which.X1, ratio_abs=">1"
            )
        return RealClassification(
            RealVerdict.CONVERGES, d, qmax, point=points.point(Which.X2), which=Which.X2, ratio_abs="<1"
        )

    log.debug("no period up to %d and D < 0: dense orbits (theta=%.12g)", qmax, theta)
    return RealClassification(RealVerdict.DENSE, d, qmax, theta=theta, r=r)


@dataclass(frozen=True)
class Converged:
    """Numeric limit of an orbit.

    ``value`` is the limit estimate and ``iterate`` the last orbit point.
    They differ only when ``extrapolated`` is set (parabolic maps, D = 0).
    """

    value: float
    n: int
    iterate: float
    extrapolated: bool = False

    @property
    def success(self) -> bool:
        return True


@dataclass(frozen=True)
class NotConverged:
    """``reason`` is "max-iterations" or "near-pole"; ``steps`` is how far the orbit got."""

    reason: str
    steps: int
    last: Optional[float] = None

    @property
    def success(self) -> bool:
        return False


OrbitLimit = Union[Converged, NotConverged]


def _parabolic_estimate(previous: float, middle: float, following: float) -> Optional[float]:
    # 1/(x_k - L) is an arithmetic progression along a parabolic orbit
    before = middle - previous
    after = following - middle
    if after == before:
        return None
    return middle - 2 * before * after / (after - before)


def _residual(f: MoebiusMap, x: float) -> float:
    try:
        return abs(apply(f, x) - x)
    except NearPole:
        return math.inf


def limit_of_orbit(
    f: MoebiusMap,
    x0: float,
    tol: float = DEFAULT_TOLERANCE,
    nmax: int = DEFAULT_MAX_ITERATIONS,
) -> OrbitLimit:
    """Iterate f in floating point until the orbit settles.

    For D != 0 the orbit has converged when |x_(n+1) - x_n| < tol and the
    fixed-point residual |f(x) - x| < 10*tol. A parabolic map (D = 0) only
    converges like 1/n, so its orbit is also read through the three-point
    estimate: once consecutive estimates agree within tol and the estimate
    has residual below 10*tol, it is reported as the limit.

    Args:
        f: Map; exact parameters are converted to floats.
        x0: Starting point.
        tol: Step tolerance, must be positive.
        nmax: Maximum number of steps.

    Returns:
        Converged or NotConverged.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    parabolic = f.discriminant == 0
    g = f.to_numeric() if f.is_exact else f

    previous: Optional[float] = None
    estimate: Optional[float] = None
    x = float(x0)
    for n in range(1, nmax + 1):
        try:
            following = apply(g, x, index=n - 1)
        except NearPole:
            log.debug("orbit from %s near the pole at step %d", x0, n - 1)
            return NotConverged("near-pole", n - 1, x)

        if abs(following - x) < tol and _residual(g, following) < 10 * tol:
            log.debug("orbit from %s converged after %d steps", x0, n)
            if parabolic and previous is not None:
                guess = _parabolic_estimate(previous, x, following)
                if guess is not None:
                    return Converged(guess, n, following, extrapolated=True)
            return Converged(following, n, following)

        if parabolic and previous is not None:
            guess = _parabolic_estimate(previous, x, following)
            if (
                guess is not None
                and estimate is not None
                and abs(guess - estimate) < tol
                and _residual(g, guess) < 10 * tol
            ):
                log.debug("parabolic orbit from %s extrapolated after %d steps", x0, n)
                return Converged(guess, n, following, extrapolated=True)
            estimate = guess

        previous, x = x, following

    return NotConverged("max-iterations", nmax, x)


@dataclass
class Histogram:
    """Bin counts of an orbit over [lo, hi].

    Orbit points below lo or above hi go to the ``below``/``above`` sinks,
    points lost to the pole are counted in ``skipped``.
    """

    edges: list[float]
    counts: list[int]
    below: int = 0
    above: int = 0
    skipped: int = 0
    n: int = 0

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def empty_bins(self) -> int:
        return sum(1 for count in self.counts if count == 0)

    @property
    def nonempty_bins(self) -> int:
        return len(self.counts) - self.empty_bins


def orbit_samples(f: MoebiusMap, x0: float, n: int) -> tuple[np.ndarray, int]:
    """Float orbit f^1(x0) .. f^n(x0) with NaN where the orbit passed the pole.

    A point within the guard of the pole is mapped to infinity (one skip)
    and the orbit resumes at f(inf) = 1/b.
    """
    g = f.to_numeric() if f.is_exact else f
    samples = np.full(n, np.nan)
    skipped = 0
    x: Optional[float] = float(x0)
    for k in range(n):
        if x is None:
            x = 1 / g.b
        else:
            try:
                x = apply(g, x, index=k)
            except NearPole:
                log.debug("density orbit passed the pole at step %d", k)
                skipped += 1
                x = None
                continue
        samples[k] = x
    return samples, skipped


def density_histogram(
    f: MoebiusMap,
    x0: float,
    n: int,
    bins: int = 40,
    lo: float = -10.0,
    hi: float = 10.0,
) -> Histogram:
    """Histogram of {f^k(x0) : 1 <= k <= n} on ``bins`` equal bins over [lo, hi].

    Returns:
        Histogram with total + below + above + skipped == n.
    """
    if bins < 1:
        raise ValueError("bins must be positive")
    if not lo < hi:
        raise ValueError("lo must be below hi")
    if n < 0:
        raise ValueError("n must be non-negative")

    edges = np.linspace(lo, hi, bins + 1)
    samples, skipped = orbit_samples(f, x0, n)
    finite = samples[~np.isnan(samples)]
    counts, _ = np.histogram(finite, bins=edges)

    return Histogram(
        edges=[float(edge) for edge in edges],
        counts=[int(count) for count in counts],
        below=int(np.count_nonzero(finite < lo)),
        above=int(np.count_nonzero(finite > hi)),
        skipped=skipped,
        n=n,
    )
