"""Exact scalars: rationals, quadratic extensions of Q and p-adic valuations.

Rationals are ``fractions.Fraction`` values. ``QuadExt`` holds u + v*sqrt(d)
with a formal square root, and ``PVal`` is a p-adic norm p^(-v) kept through
its exact valuation v.
"""

import cmath
import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Optional, Union

from .errors import (
    ExtensionMismatchError,
    InvalidPrimeError,
    InvalidRationalError,
    ReducibleExtensionError,
)

log = logging.getLogger(__name__)

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse "n" or "n/m" into a Fraction in lowest terms.

    Decimal and exponent notation are rejected so that float rounding never
    leaks into an exact computation.

    Raises:
        InvalidRationalError: text is not an integer or integer ratio.
    """
    match = _RATIONAL_RE.match(str(text))
    if match is None:
        raise InvalidRationalError(f"not an exact rational (use n or n/m): {text!r}")

    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise InvalidRationalError(f"zero denominator: {text!r}")

    return Fraction(numerator, denominator)


def is_prime(n: int) -> bool:
    """Trial-division primality test (inputs are small)."""
    if n < 2:
        return False
    if n in (2, 3):
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    limit = math.isqrt(n)
    f = 5
    step = 2
    while f <= limit:
        if n % f == 0:
            return False
        f += step
        step = 6 - step
    return True


def require_prime(p: int) -> int:
    """Return p unchanged, or raise InvalidPrimeError."""
    if isinstance(p, bool) or not isinstance(p, int) or not is_prime(p):
        raise InvalidPrimeError(f"p must be a prime, got {p!r}")
    return p


class Infinity(Enum):
    """Valuation of zero (norm 0)."""

    INF = "inf"

    def __str__(self) -> str:
        return "inf"


INF = Infinity.INF

Exponent = Union[Fraction, Infinity]


@total_ordering
@dataclass(frozen=True)
class PVal:
    """A p-adic norm p^(-exponent), stored through its valuation ``exponent``.

    Instances compare by the norm they stand for: ``PVal(3, 1) < PVal(3, 0)``
    reads |x|_3 = 1/3 < 1. Norm 0 (exponent INF) is the smallest value.
    ``*`` and ``/`` multiply and divide norms.
    """

    prime: int
    exponent: Exponent

    def __post_init__(self) -> None:
        if not isinstance(self.exponent, Infinity):
            object.__setattr__(self, "exponent", Fraction(self.exponent))

    @classmethod
    def zero(cls, p: int) -> "PVal":
        return cls(p, INF)

    @classmethod
    def one(cls, p: int) -> "PVal":
        return cls(p, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return self.exponent is INF

    @property
    def norm_exponent(self) -> Optional[Fraction]:
        """Power of p in the norm (-exponent); None for norm 0."""
        if self.is_zero:
            return None
        return -self.exponent

    def _same_prime(self, other: object) -> "PVal":
        if not isinstance(other, PVal):
            raise TypeError(f"expected PVal, got {type(other).__name__}")
        if other.prime != self.prime:
            raise ValueError(f"norms for different primes: {self.prime} and {other.prime}")
        return other

    def __lt__(self, other: object) -> bool:
        other = self._same_prime(other)
        if self.is_zero:
            return not other.is_zero
        if other.is_zero:
            return False
        return self.exponent > other.exponent

    def __mul__(self, other: "PVal") -> "PVal":
        other = self._same_prime(other)
        if self.is_zero or other.is_zero:
            return PVal.zero(self.prime)
        return PVal(self.prime, self.exponent + other.exponent)

    def __truediv__(self, other: "PVal") -> "PVal":
        other = self._same_prime(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the norm of zero")
        if self.is_zero:
            return self
        return PVal(self.prime, self.exponent - other.exponent)

    def sqrt(self) -> "PVal":
        """Norm of a square root: halves the valuation."""
        if self.is_zero:
            return self
        return PVal(self.prime, self.exponent / 2)

    def decimal(self) -> float:
        if self.is_zero:
            return 0.0
        return float(self.prime) ** float(-self.exponent)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return f"{self.prime}^({-self.exponent})"

    def to_json(self) -> dict:
        return {
            "p": self.prime,
            "exponent": str(self.exponent),
            "norm": str(self),
            "decimal": self.decimal(),
        }


def _int_val(n: int, p: int) -> int:
    n = abs(n)
    count = 0
    while n % p == 0:
        n //= p
        count += 1
    return count


def padic_val(x: Union[int, Fraction], p: int) -> PVal:
    """p-adic valuation of a rational: r in x = p^r * n/m with p coprime to n, m."""
    require_prime(p)
    x = Fraction(x)
    if x == 0:
        return PVal.zero(p)
    return PVal(p, _int_val(x.numerator, p) - _int_val(x.denominator, p))


class NonSquare(Enum):
    """Marker returned by sqrt_rational when no rational root exists."""

    NON_SQUARE = "non-square"


NON_SQUARE = NonSquare.NON_SQUARE


def sqrt_rational(d: Union[int, Fraction]) -> Union[Fraction, NonSquare]:
    """Non-negative rational square root of d, or NON_SQUARE."""
    d = Fraction(d)
    if d < 0:
        return NON_SQUARE
    num_root = math.isqrt(d.numerator)
    den_root = math.isqrt(d.denominator)
    if num_root * num_root == d.numerator and den_root * den_root == d.denominator:
        return Fraction(num_root, den_root)
    return NON_SQUARE


@dataclass(frozen=True, eq=False)
class QuadExt:
    """u + v*sqrt(d) in Q(sqrt(d)).

    sqrt(d) is a formal symbol; no sign or embedding is attached to it here.
    A value with v == 0 is the rational u and compares equal to it. Values
    over different radicands combine only when one of them is rational.
    """

    u: Fraction
    v: Fraction
    d: Fraction

    def __post_init__(self) -> None:
        for name in ("u", "v", "d"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def sqrt(cls, d: Union[int, Fraction]) -> "QuadExt":
        return cls(0, 1, d)

    def _pair(self, other: object) -> Optional[tuple["QuadExt", "QuadExt"]]:
        if isinstance(other, (int, Fraction)):
            return self, QuadExt(other, 0, self.d)
        if not isinstance(other, QuadExt):
            return None
        if other.d == self.d:
            return self, other
        if other.is_rational:
            return self, QuadExt(other.u, 0, self.d)
        if self.is_rational:
            return QuadExt(self.u, 0, other.d), other
        raise ExtensionMismatchError(f"cannot combine sqrt({self.d}) with sqrt({other.d})")

    def __add__(self, other: object) -> "QuadExt":
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return QuadExt(x.u + y.u, x.v + y.v, x.d)

    __radd__ = __add__

    def __neg__(self) -> "QuadExt":
        return QuadExt(-self.u, -self.v, self.d)

    def __sub__(self, other: object) -> "QuadExt":
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return QuadExt(x.u - y.u, x.v - y.v, x.d)

    def __rsub__(self, other: object) -> "QuadExt":
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return QuadExt(y.u - x.u, y.v - x.v, x.d)

    def __mul__(self, other: object) -> "QuadExt":
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return QuadExt(x.u * y.u + x.v * y.v * x.d, x.u * y.v + x.v * y.u, x.d)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "QuadExt":
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return x._divide(y)

    def __rtruediv__(self, other: object) -> "QuadExt":
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return y._divide(x)

    def _divide(self, other: "QuadExt") -> "QuadExt":
        norm = other.norm()
        if norm == 0:
            if other.u == 0 and other.v == 0:
                raise ZeroDivisionError("division by zero in Q(sqrt(d))")
            raise ReducibleExtensionError(f"sqrt({other.d}) is rational; reduce to Rational first")
        num = self * other.conjugate()
        return QuadExt(num.u / norm, num.v / norm, self.d)

    def __pow__(self, n: int) -> "QuadExt":
        if n < 0:
            return (1 / self) ** (-n)
        result = QuadExt(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.u, -self.v, self.d)

    def norm(self) -> Fraction:
        """u^2 - d*v^2, multiplicative."""
        return self.u * self.u - self.d * self.v * self.v

    def trace(self) -> Fraction:
        return 2 * self.u

    @property
    def is_rational(self) -> bool:
        return self.v == 0

    def reduce(self) -> Union[Fraction, "QuadExt"]:
        return self.u if self.is_rational else self

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.u == other
        if isinstance(other, QuadExt):
            if self.is_rational and other.is_rational:
                return self.u == other.u
            return (self.u, self.v, self.d) == (other.u, other.v, other.d)
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.u)
        return hash((self.u, self.v, self.d))

    def __float__(self) -> float:
        if not self.is_rational and self.d < 0:
            raise TypeError(f"{self} is not real")
        if self.is_rational:
            return float(self.u)
        return float(self.u) + float(self.v) * math.sqrt(self.d)

    def __complex__(self) -> complex:
        return complex(float(self.u)) + float(self.v) * cmath.sqrt(float(self.d))

    def __str__(self) -> str:
        return f"{self.u} + {self.v}*sqrt({self.d})"


def sqrt_mod_prime(n: int, p: int) -> Optional[int]:
    """Return x with x*x = n (mod p), or None if n is a non-residue. p must be prime."""
    n %= p
    if n == 0:
        return 0
    if p == 2:
        return n
    if pow(n, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)

    # Tonelli-Shanks
    q = p - 1
    s = 0
    while q % 2 == 0:
        s += 1
        q //= 2

    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1

    m = s
    c = pow(z, q, p)
    t = pow(n, q, p)
    r = pow(n, (q + 1) // 2, p)

    while t != 1:
        i = 1
        t2i = (t * t) % p
        while i < m and t2i != 1:
            t2i = (t2i * t2i) % p
            i += 1

        b = pow(c, 1 << (m - i - 1), p)
        r = (r * b) % p
        c = (b * b) % p
        t = (t * c) % p
        m = i

    return r


def _residue(x: Fraction, modulus: int) -> int:
    """x mod modulus for x with denominator coprime to modulus."""
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def split_embedding(d: Fraction, p: int) -> Optional[tuple[int, int]]:
    """Embedding data when p splits in Q(sqrt(d)); None when it ramifies or stays inert.

    Writes d = p^(2k) * d1 with d1 a p-adic unit and pins sqrt(d) = p^k * delta.
    Returns (k, theta), where theta is the residue mod p of the integral
    generator in the chosen embedding: delta itself for odd p (the least
    positive root of d1 mod p), and (1 + delta)/2 for p = 2 (residue 1).
    """
    e = padic_val(d, p).exponent
    if e % 2:
        return None
    k = int(e) // 2
    d1 = Fraction(d) / Fraction(p) ** (2 * k)

    if p == 2:
        if _residue(d1, 8) != 1:
            return None
        return k, 1

    root = sqrt_mod_prime(_residue(d1, p), p)
    if root is None:
        return None
    return k, min(root, p - root)


def quad_val(x: QuadExt, p: int) -> PVal:
    """p-adic valuation of an element of Q(sqrt(d)).

    Ramified and inert p have a unique extension, v(x) = v(N(x))/2. When p
    splits, the value is taken in the embedding pinned by split_embedding.

    Raises:
        ReducibleExtensionError: d is the square of a rational.
    """
    require_prime(p)
    if sqrt_rational(x.d) is not NON_SQUARE:
        raise ReducibleExtensionError(f"sqrt({x.d}) is rational; reduce to Rational first")
    if x.is_rational:
        return padic_val(x.u, p)

    norm_exponent = padic_val(x.norm(), p).exponent
    split = split_embedding(x.d, p)
    if split is None:
        return PVal(p, norm_exponent / 2)

    # x = p^m * (first' + second' * theta) with integral coordinates, one a unit.
    k, theta = split
    first, second = x.u, x.v * Fraction(p) ** k
    if p == 2:
        first, second = first - second, 2 * second
    m = min(padic_val(c, p).exponent for c in (first, second) if c != 0)
    scale = Fraction(p) ** int(m)
    residue = (_residue(first / scale, p) + _residue(second / scale, p) * theta) % p
    log.debug("split prime %d for sqrt(%s): theta=%d residue=%d", p, x.d, theta, residue)
    if residue:
        return PVal(p, m)
    return PVal(p, norm_exponent - m)


def valuation(x: Union[int, Fraction, QuadExt], p: int) -> PVal:
    """Valuation of a rational or quadratic-extension scalar."""
    if isinstance(x, QuadExt):
        if x.is_rational:
            return padic_val(x.u, p)
        return quad_val(x, p)
    return padic_val(x, p)


def format_scalar(x: object) -> str:
    """Render a scalar: "n/m" for rationals, "u + v*sqrt(D)" for extension values."""
    if isinstance(x, QuadExt):
        x = x.reduce()
    if isinstance(x, float):
        return repr(x)
    return str(x)


def to_decimal(x: object) -> Optional[float]:
    """Float approximation, or None for a non-real extension value."""
    if isinstance(x, QuadExt):
        if not x.is_rational and x.d < 0:
            return None
    return float(x)
