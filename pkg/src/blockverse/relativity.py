"""1+1-dimensional Lorentz kinematics: boosts, intervals, and event order.

Everything is in c = 1 units (times in seconds, positions in light-seconds).
Kinematics is floating point by design: gamma is irrational for almost every
velocity, and the exactness requirement of the core modules applies to
probabilities, not to spacetime coordinates. Comparisons use a documented
relative tolerance instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

__all__ = [
    "Boost",
    "Event",
    "Interval",
    "NoReversingFrame",
    "TimeOrder",
    "TOLERANCE",
    "boost_event",
    "compose_boosts",
    "interval_class",
    "interval_squared",
    "reversing_velocity",
    "simultaneity_offset",
    "temporal_order",
]

#: Default relative tolerance for classifying intervals and time order.
TOLERANCE = 1e-12


class Interval(Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


class TimeOrder(Enum):
    BEFORE = "before"
    SIMULTANEOUS = "simultaneous"
    AFTER = "after"


class NoReversingFrame(ValueError):
    """The pair is timelike or lightlike: its temporal order is absolute."""


@dataclass(frozen=True)
class Event:
    """Spacetime point (t, x) with an optional display label."""

    t: float
    x: float
    label: str = ""

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t) and math.isfinite(self.x)):
            raise ValueError(f"event coordinates must be finite: {self}")


@dataclass(frozen=True)
class Boost:
    """Frame moving at velocity v (fraction of c) along the x axis."""

    v: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.v) or abs(self.v) >= 1.0:
            raise ValueError(f"|v| must be strictly below 1 (c = 1), got {self.v}")

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.v * self.v)

    def inverse(self) -> "Boost":
        return Boost(-self.v)


def boost_event(e: Event, b: Boost) -> Event:
    """Coordinates of the event in the boosted frame."""
    g = b.gamma
    return replace(e, t=g * (e.t - b.v * e.x), x=g * (e.x - b.v * e.t))


def compose_boosts(b1: Boost, b2: Boost) -> Boost:
    """Single boost equivalent to applying b1 then b2 (velocity addition)."""
    return Boost((b1.v + b2.v) / (1.0 + b1.v * b2.v))


def interval_squared(e1: Event, e2: Event) -> float:
    """Invariant interval s^2 = dt^2 - dx^2 (positive timelike convention)."""
    dt = e2.t - e1.t
    dx = e2.x - e1.x
    return dt * dt - dx * dx


def _scale(e1: Event, e2: Event) -> float:
    dt = e2.t - e1.t
    dx = e2.x - e1.x
    return max(dt * dt + dx * dx, 1.0)


def interval_class(e1: Event, e2: Event, tol: float = TOLERANCE) -> Interval:
    s2 = interval_squared(e1, e2)
    threshold = tol * _scale(e1, e2)
    if s2 > threshold:
        return Interval.TIMELIKE
    if s2 < -threshold:
        return Interval.SPACELIKE
    return Interval.LIGHTLIKE


def temporal_order(e1: Event, e2: Event, b: Boost, tol: float = TOLERANCE) -> TimeOrder:
    """Order of e1 relative to e2 as seen from the boosted frame."""
    t1 = boost_event(e1, b).t
    t2 = boost_event(e2, b).t
    threshold = tol * max(abs(t1), abs(t2), 1.0)
    if t1 < t2 - threshold:
        return TimeOrder.BEFORE
    if t1 > t2 + threshold:
        return TimeOrder.AFTER
    return TimeOrder.SIMULTANEOUS


def simultaneity_offset(x: float, b: Boost) -> float:
    """Time lag v*x (c = 1) that makes claps at separation x simultaneous
    in the moving frame; the sign follows the direction of motion."""
    return b.v * x


def reversing_velocity(e1: Event, e2: Event) -> Boost:
    """Boost v* = dt/dx at which the two events are simultaneous.

    Frames faster than v* (same sign) see the order reversed. Only spacelike
    pairs have such a frame; for timelike or lightlike pairs the order is the
    same in every frame and NoReversingFrame is raised.
    """
    kind = interval_class(e1, e2)
    if kind is not Interval.SPACELIKE:
        raise NoReversingFrame(
            f"events {e1.label or e1} and {e2.label or e2} are {kind.value}; "
            "their temporal order is frame-invariant"
        )
    return Boost((e2.t - e1.t) / (e2.x - e1.x))
