"""Exception types shared by the arithmetic, dynamics and CLI layers."""

from typing import Any


class MoebiusError(Exception):
    """Base class for every error raised by moebius_dyn."""


class InvalidParametersError(MoebiusError, ValueError):
    """Parameters violate b != 0 and c != ab."""


class InvalidPrimeError(MoebiusError, ValueError):
    """A p-adic routine was handed a non-prime p."""


class InvalidRationalError(MoebiusError, ValueError):
    """Text could not be parsed as an exact rational."""


class ReducibleExtensionError(MoebiusError, ValueError):
    """The radicand is a rational square, so the value should be reduced to a Rational first."""


class ExtensionMismatchError(MoebiusError, ValueError):
    """Two quadratic-extension values with different radicands were combined."""


class WrongCaseError(MoebiusError, ValueError):
    """An operation was called outside the discriminant regime it covers."""


class NeedsPointError(MoebiusError, ValueError):
    """A radius map was evaluated on its sphere radius without the point-dependent value."""


class ConsistencyError(MoebiusError, AssertionError):
    """An identity that must hold exactly did not."""


class PoleHit(MoebiusError):
    """The orbit reached the exact pole of the map (or of its inverse).

    ``index`` is the position in the orbit of the point that cannot be mapped.
    """

    def __init__(self, index: int, point: Any):
        super().__init__(f"orbit hits the pole at index {index} (point {point})")
        self.index = index
        self.point = point


class NearPole(MoebiusError):
    """Float iteration came within the configured guard of the pole."""

    def __init__(self, index: int, point: Any):
        super().__init__(f"orbit is within the pole guard at index {index} (point {point})")
        self.index = index
        self.point = point


class ConfigError(MoebiusError, ValueError):
    """config.json is missing, malformed or holds an out-of-range value."""
