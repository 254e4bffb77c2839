"""Exact rational arithmetic and exact values of the half-angle cos^2 rule.

Probabilities in the core modules are ``fractions.Fraction`` values: the
stdlib type already guarantees a positive denominator and gcd-1 canonical
form on every construction, and its arithmetic is arbitrary precision.
This module adds the pieces the simulator needs on top of that: integer
filter angles, the whitelist of angle differences whose half-angle cos^2
is exactly rational, and best-rational approximation for everything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "Angle",
    "EXACT_DELTAS",
    "NotExactlyRepresentable",
    "Rational",
    "half_angle_cos2_exact",
    "has_exact_cos2",
    "rational",
    "rational_approx",
]

Rational = Fraction


class NotExactlyRepresentable(ValueError):
    """cos^2(delta/2) is irrational for this angle difference."""


@dataclass(frozen=True, order=True)
class Angle:
    """Spin-filter orientation in whole degrees, normalized to [0, 360)."""

    degrees: int

    def __post_init__(self) -> None:
        if not isinstance(self.degrees, int) or isinstance(self.degrees, bool):
            raise TypeError(f"angle must be an integer degree count, got {self.degrees!r}")
        object.__setattr__(self, "degrees", self.degrees % 360)

    def __add__(self, other: "Angle | int") -> "Angle":
        return Angle(self.degrees + _degrees_of(other))

    def __sub__(self, other: "Angle | int") -> "Angle":
        return Angle(self.degrees - _degrees_of(other))

    def opposite(self) -> "Angle":
        return Angle(self.degrees + 180)

    def separation(self) -> int:
        """Absolute angular distance from 0, in [0, 180]."""
        return min(self.degrees, 360 - self.degrees)

    def radians(self) -> float:
        return math.radians(self.degrees)

    def __str__(self) -> str:
        return f"{self.degrees}deg"


def _degrees_of(a: "Angle | int") -> int:
    return a.degrees if isinstance(a, Angle) else int(a)


def rational(numerator, denominator=None) -> Fraction:
    """Build a canonical Fraction; accepts ints, 'p/q' strings, and Fractions."""
    if denominator is not None:
        return Fraction(numerator, denominator)
    return Fraction(numerator)


# cos^2(h deg) for the half-angles h where the value is rational.
# cos^2 has period 180 and cos^2(180 - h) = cos^2(h), hence the symmetry.
_HALF_ANGLE_COS2 = {
    0: Fraction(1),
    30: Fraction(3, 4),
    45: Fraction(1, 2),
    60: Fraction(1, 4),
    90: Fraction(0),
    120: Fraction(1, 4),
    135: Fraction(1, 2),
    150: Fraction(3, 4),
}

#: Angle differences (mod 360) with an exactly rational cos^2(delta/2):
#: the multiples of 60 plus the quarter turns.
EXACT_DELTAS = frozenset(2 * h for h in _HALF_ANGLE_COS2)


def has_exact_cos2(delta: "Angle | int") -> bool:
    return _degrees_of(delta) % 360 in EXACT_DELTAS


def half_angle_cos2_exact(delta: "Angle | int") -> Fraction:
    """Exact rational value of cos^2(delta/2) for whitelisted differences.

    Raises NotExactlyRepresentable for any other angle; callers may fall
    back to :func:`rational_approx` on the floating-point value.
    """
    deg = _degrees_of(delta) % 360
    if deg % 2 == 0:
        value = _HALF_ANGLE_COS2.get((deg // 2) % 180)
        if value is not None:
            return value
    raise NotExactlyRepresentable(
        f"cos^2({deg}/2 deg) is not rational; supported differences: "
        f"{sorted(EXACT_DELTAS)}"
    )


def rational_approx(x, max_denominator: int = 10**6) -> Fraction:
    """Best rational approximation to x among denominators <= max_denominator.

    No fraction with a denominator within the bound lies strictly closer
    to x (continued-fraction search via Fraction.limit_denominator).
    """
    if max_denominator < 1:
        raise ValueError(f"max_denominator must be >= 1, got {max_denominator}")
    if isinstance(x, Fraction):
        exact = x
    elif isinstance(x, int):
        exact = Fraction(x)
    else:
        if not math.isfinite(x):
            raise ValueError(f"cannot approximate non-finite value {x!r}")
        exact = Fraction(x)
    return exact.limit_denominator(max_denominator)
