"""The Moebius map f(x) = (x + a)/(b*x + c) and its parameter-level algebra.

Maps are exact (Fraction parameters) or numeric (float parameters). Exact
maps detect the pole by equality and raise PoleHit; numeric maps use a guard
on the denominator and raise NearPole.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .errors import ConsistencyError, InvalidParametersError, InvalidRationalError, NearPole, PoleHit
from .exact import NON_SQUARE, QuadExt, parse_rational, sqrt_rational

log = logging.getLogger(__name__)

DEFAULT_POLE_GUARD = 1e-12
DEFAULT_QMAX = 64

Number = Union[Fraction, float]
Value = Union[Fraction, QuadExt, float, complex]


class Which(str, Enum):
    """Label of a fixed point: x1 takes the + branch of sqrt(D)."""

    X1 = "x1"
    X2 = "x2"
    UNIQUE = "unique"


def _to_fraction(value: object) -> Fraction:
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise InvalidRationalError(f"float parameter {value!r} in an exact map")
    return Fraction(value)


@dataclass(frozen=True)
class MoebiusMap:
    """f(x) = (x + a)/(b*x + c) with b != 0 and c != a*b.

    The pole x_hat = -c/b is excluded from every application.
    """

    a: Number
    b: Number
    c: Number
    pole_guard: float = field(default=DEFAULT_POLE_GUARD, compare=False)

    def __post_init__(self) -> None:
        if self.b == 0:
            raise InvalidParametersError("b must be nonzero")
        if self.c - self.a * self.b == 0:
            raise InvalidParametersError(f"c must differ from a*b (c = ab = {self.c})")

    @classmethod
    def exact(cls, a: object, b: object, c: object) -> "MoebiusMap":
        """Build an exact map from ints, Fractions or "n/m" strings."""
        return cls(_to_fraction(a), _to_fraction(b), _to_fraction(c))

    @classmethod
    def numeric(
        cls, a: object, b: object, c: object, pole_guard: float = DEFAULT_POLE_GUARD
    ) -> "MoebiusMap":
        return cls(float(a), float(b), float(c), pole_guard)

    def to_numeric(self) -> "MoebiusMap":
        """Float twin of this map, used for numeric orbit work."""
        return MoebiusMap.numeric(self.a, self.b, self.c, self.pole_guard)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in (self.a, self.b, self.c))

    @property
    def pole(self) -> Number:
        return -self.c / self.b

    @property
    def discriminant(self) -> Number:
        return (self.c - 1) ** 2 + 4 * self.a * self.b

    @property
    def determinant(self) -> Number:
        """c - a*b, never zero."""
        return self.c - self.a * self.b

    def __str__(self) -> str:
        return f"f(x) = (x + {self.a})/({self.b}*x + {self.c})"


def _vanishes(value: Value, guard: float, scale: float = 1.0) -> bool:
    if isinstance(value, (float, complex)):
        return abs(value) < guard * scale
    return value == 0


def _pole_error(value: Value, index: int, point: object) -> Exception:
    if isinstance(value, (float, complex)):
        return NearPole(index, point)
    return PoleHit(index, point)


def _coerce(f: MoebiusMap, x: object) -> Value:
    if f.is_exact and isinstance(x, int):
        return Fraction(x)
    return x


def apply(f: MoebiusMap, x: Value, index: int = 0) -> Value:
    """f(x). ``index`` is the orbit position reported if x is the pole.

    Raises:
        PoleHit: exact x equals -c/b.
        NearPole: float |b*x + c| is below the map's pole guard.
    """
    den = f.b * x + f.c
    if _vanishes(den, f.pole_guard):
        raise _pole_error(den, index, x)
    return (x + f.a) / den


@dataclass(frozen=True)
class InverseMap:
    """g(x) = (a - c*x)/(b*x - 1), defined for x != 1/b."""

    f: MoebiusMap

    @property
    def pole(self) -> Number:
        return 1 / self.f.b

    def __call__(self, x: Value, index: int = 0) -> Value:
        den = self.f.b * x - 1
        if _vanishes(den, self.f.pole_guard):
            raise _pole_error(den, index, x)
        return (self.f.a - self.f.c * x) / den


def inverse(f: MoebiusMap) -> InverseMap:
    return InverseMap(f)


@dataclass(frozen=True)
class FixedPointSet:
    """Fixed points of f: two for D != 0 (x1, x2), one for D = 0, none for real D < 0."""

    discriminant: Number
    points: tuple
    double: bool

    @property
    def labels(self) -> tuple:
        if self.double:
            return (Which.UNIQUE,)
        if not self.points:
            return ()
        return (Which.X1, Which.X2)

    def point(self, which: Which) -> Value:
        for label, value in zip(self.labels, self.points):
            if label == which:
                return value
        raise KeyError(f"no fixed point labelled {which.value}")

    def __len__(self) -> int:
        return len(self.points)


def _sqrt_discriminant(f: MoebiusMap) -> Value:
    d = f.discriminant
    if f.is_exact:
        root = sqrt_rational(d)
        if root is NON_SQUARE:
            return QuadExt.sqrt(d)
        return root
    if d >= 0:
        return math.sqrt(d)
    return cmath.sqrt(d)


def _reduce(value: Value) -> Value:
    if isinstance(value, QuadExt):
        return value.reduce()
    return value


def fixed_points(f: MoebiusMap, closed: bool = False) -> FixedPointSet:
    """Fixed points from the quadratic b*x^2 + (c-1)*x - a = 0.

    In real mode (closed=False) a negative discriminant gives no points; in
    closed mode both roots are returned as extension (or complex) values.
    """
    d = f.discriminant
    if d == 0:
        return FixedPointSet(d, ((1 - f.c) / (2 * f.b),), True)
    if d < 0 and not closed:
        return FixedPointSet(d, (), False)

    root = _sqrt_discriminant(f)
    x1 = _reduce((1 - f.c + root) / (2 * f.b))
    x2 = _reduce((1 - f.c - root) / (2 * f.b))

    if f.is_exact:
        for x in (x1, x2):
            if f.b * x * x + (f.c - 1) * x - f.a != 0:
                raise ConsistencyError(f"{x} is not a root of the fixed-point quadratic")

    return FixedPointSet(d, (x1, x2), False)


def alpha_beta(f: MoebiusMap) -> tuple:
    """alpha = (1 + c + sqrt(D))/2, beta = (1 + c - sqrt(D))/2.

    Uses the same sqrt(D) symbol as fixed_points, so alpha = b*x1 + c and
    beta = b*x2 + c.
    """
    d = f.discriminant
    if d == 0:
        half = (1 + f.c) / 2
        return half, half

    root = _sqrt_discriminant(f)
    alpha = _reduce((1 + f.c + root) / 2)
    beta = _reduce((1 + f.c - root) / 2)

    if f.is_exact:
        if alpha * beta != f.determinant or alpha + beta != 1 + f.c:
            raise ConsistencyError(f"alpha, beta inconsistent for {f}")

    return alpha, beta


def _settle(value: Value, x: Value) -> Value:
    if isinstance(value, QuadExt):
        if isinstance(x, QuadExt):
            return value.reduce()
        if value.v != 0:
            raise ConsistencyError(f"closed form left an irrational part: {value}")
        return value.u
    if isinstance(value, complex) and not isinstance(x, complex):
        return value.real
    return value


def _closed_terms(f: MoebiusMap, x: Value, alpha: Value, beta: Value):
    """Yield (E_k, magnitude) for k = 0, 1, 2, ... The magnitude scales the float guard."""
    shift = f.b * x - 1
    k = 0
    if alpha == beta:
        power = alpha ** 0
        while True:
            linear = shift * k + (k + 1) * alpha
            yield power * linear, 1.0 if f.is_exact else abs(power) * (abs(shift) * k + (k + 1) * abs(alpha))
            power = power * alpha
            k += 1
    lead = shift + alpha
    trail = shift + beta
    alpha_power = alpha ** 0
    beta_power = beta ** 0
    while True:
        head = lead * alpha_power
        tail = trail * beta_power
        yield head - tail, 1.0 if f.is_exact else abs(head) + abs(tail)
        alpha_power = alpha_power * alpha
        beta_power = beta_power * beta


def iterate_closed(f: MoebiusMap, x: Value, n: int) -> Value:
    """f^n(x) from the closed form in alpha and beta.

    With E_k = (bx-1+alpha)*alpha^k - (bx-1+beta)*beta^k (alpha != beta), or
    E_k = alpha^k * ((bx-1)*k + (k+1)*alpha) (alpha == beta),
    f^k(x) = 1/b + (ab-c)/b * E_(k-1)/E_k. E_k first vanishes exactly when
    f^(k-1)(x) is the pole.

    Raises:
        PoleHit / NearPole: with the orbit index that reaches the pole.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    x = _coerce(f, x)
    alpha, beta = alpha_beta(f)

    terms = _closed_terms(f, x, alpha, beta)
    current, _ = next(terms)
    for k in range(1, n + 1):
        previous = current
        current, scale = next(terms)
        if _vanishes(current, f.pole_guard, scale):
            raise _pole_error(current, k - 1, f.pole)

    value = 1 / f.b + (f.a * f.b - f.c) / f.b * (previous / current)
    return _settle(value, x)


def iterate_naive(f: MoebiusMap, x: Value, n: int) -> list:
    """Orbit [x, f(x), ..., f^n(x)] by repeated application."""
    x = _coerce(f, x)
    orbit = [x]
    for k in range(n):
        orbit.append(apply(f, orbit[-1], index=k))
    return orbit


def k_sequence(f: MoebiusMap, qmax: int) -> list:
    """[K_1, ..., K_qmax] from K_(q+2) = (c+1)*K_(q+1) - (c-ab)*K_q, K_1 = 1, K_2 = 1 + c."""
    if qmax < 1:
        raise ValueError("qmax must be at least 1")
    one = f.c ** 0
    ks = [one, one + f.c]
    while len(ks) < qmax:
        ks.append((f.c + 1) * ks[-1] - f.determinant * ks[-2])
    return ks[:qmax]


def k_q(f: MoebiusMap, q: int) -> Number:
    """K_q by the linear recurrence, staying in the base field."""
    return k_sequence(f, q)[q - 1]


def k_power_sum(f: MoebiusMap, q: int) -> Value:
    """K_q as the power sum of alpha^(q-j-1) * beta^j, in extension arithmetic."""
    if q < 1:
        raise ValueError("q must be at least 1")
    alpha, beta = alpha_beta(f)
    total = sum((alpha ** (q - j - 1) * beta ** j for j in range(q)), alpha ** 0 - 1)
    return _reduce(total)


def min_period(f: MoebiusMap, qmax: int = DEFAULT_QMAX) -> Optional[int]:
    """Smallest q in 2..qmax with K_q = 0, else None."""
    if qmax < 2:
        raise ValueError("qmax must be at least 2")
    ks = k_sequence(f, qmax)
    for q in range(2, qmax + 1):
        if ks[q - 1] == 0:
            log.debug("K_%d vanishes for %s", q, f)
            return q
    log.debug("no K_q zero for q <= %d for %s", qmax, f)
    return None


def iterate_coefficients(f: MoebiusMap, q: int) -> tuple:
    """(a_q, b_q, c_q, d_q) with f^q(x) = (a_q*x + b_q)/(c_q*x + d_q)."""
    if q < 1:
        raise ValueError("q must be at least 1")
    a_q, b_q, c_q, d_q = f.c ** 0, f.a, f.b, f.c
    for _ in range(q - 1):
        a_q, b_q, c_q, d_q = (
            a_q + f.b * b_q,
            f.a * a_q + f.c * b_q,
            c_q + f.b * d_q,
            f.a * c_q + f.c * d_q,
        )
    return a_q, b_q, c_q, d_q


@dataclass(frozen=True)
class BadPointSet:
    """Backward orbit of the pole: points[n] = f^(-n)(x_hat).

    ``stopped`` is "inverse-pole" when a point equals 1/b (it has no
    preimage, being f(inf)) and None when ``depth`` was reached.
    """

    depth: int
    points: tuple
    stopped: Optional[str] = None

    def __contains__(self, x: object) -> bool:
        return x in self.points


def bad_points(f: MoebiusMap, depth: int) -> BadPointSet:
    """Iterated preimages of the pole, up to ``depth`` steps back."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    g = inverse(f)
    points = [f.pole]
    stopped = None
    while len(points) <= depth:
        try:
            preimage = g(points[-1])
        except (PoleHit, NearPole):
            stopped = "inverse-pole"
            break
        points.append(preimage)
    return BadPointSet(depth, tuple(points), stopped)
