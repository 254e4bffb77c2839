"""Sequential-collapse statistics for a spin-singlet pair measured by Alice and Bob.

The first measurement finds spin up along its filter with probability 1/2 and
collapses the partner electron to the opposite orientation; the second
measurement then finds up with probability cos^2 of half the angle between the
collapsed spin and its own filter. Running the collapse in either measurement
order yields the same joint kernel exactly, even though the in-flight state it
posits differs between orders. Both facts are surfaced here: the joint kernel
for each order, and the order-dependent intermediate spin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .exact import (
    Angle,
    NotExactlyRepresentable,
    half_angle_cos2_exact,
    has_exact_cos2,
    rational_approx,
)
from .kernels import Kernel, Label

__all__ = [
    "CollapseDetail",
    "ExperimentConfig",
    "InvarianceReport",
    "MeasurementOrder",
    "collapse_detail",
    "collapse_joint",
    "intermediate_state",
    "joint_label",
    "order_invariance_check",
]


class MeasurementOrder(Enum):
    ALICE_FIRST = "alice-first"
    BOB_FIRST = "bob-first"


@dataclass(frozen=True)
class ExperimentConfig:
    """Filter angles, which measurement happens first, and the arithmetic mode.

    ``max_denominator=None`` selects exact mode, valid only when the filter
    difference is on the exact-cos^2 whitelist; otherwise pass a denominator
    bound and conditional probabilities are best rational approximations.
    """

    alice: Angle
    bob: Angle
    order: MeasurementOrder = MeasurementOrder.ALICE_FIRST
    max_denominator: int | None = None

    def __post_init__(self) -> None:
        if self.max_denominator is None:
            delta = self.alice - self.bob
            if not has_exact_cos2(delta):
                raise NotExactlyRepresentable(
                    f"filter difference {delta.degrees} deg has no exact cos^2 value; "
                    "use approximate mode (max_denominator=...)"
                )
        elif self.max_denominator < 1:
            raise ValueError("max_denominator must be >= 1")

    @property
    def exact(self) -> bool:
        return self.max_denominator is None

    def first_filter(self) -> Angle:
        return self.alice if self.order is MeasurementOrder.ALICE_FIRST else self.bob

    def second_filter(self) -> Angle:
        return self.bob if self.order is MeasurementOrder.ALICE_FIRST else self.alice


def joint_label(alice_up: bool, bob_up: bool) -> Label:
    """Fixed Au/Ad/Bu/Bd naming: outcomes are relative to each filter."""
    return (f"A{'u' if alice_up else 'd'}B{'u' if bob_up else 'd'}",)


@dataclass(frozen=True)
class CollapseDetail:
    """Joint kernel plus the collapse bookkeeping the CLI reports."""

    kernel: Kernel
    config: ExperimentConfig
    up_conditional: Fraction  # P(second up | first up)
    down_conditional: Fraction  # P(second up | first down)
    approx_error: float  # |approximated - float cos^2|, 0.0 in exact mode


def _second_up_conditionals(config: ExperimentConfig) -> tuple[Fraction, Fraction, float]:
    """P(second measures up) given the first outcome was up resp. down."""
    first, second = config.first_filter(), config.second_filter()
    collapsed_up = first.opposite()  # partner electron after first measured up
    collapsed_down = first
    if config.exact:
        c_up = half_angle_cos2_exact(collapsed_up - second)
        c_down = half_angle_cos2_exact(collapsed_down - second)
        return c_up, c_down, 0.0
    # Evaluate cos^2 once on the absolute angular separation so both orders
    # see bit-identical floats; the up-branch conditional is its exact
    # complement (collapsed states are antipodal: cos^2 + sin^2 = 1).
    separation = (collapsed_down - second).separation()
    value = math.cos(math.radians(separation) / 2.0) ** 2
    c_down = rational_approx(value, config.max_denominator)
    return 1 - c_down, c_down, abs(float(c_down) - value)


def collapse_detail(config: ExperimentConfig) -> CollapseDetail:
    c_up, c_down, err = _second_up_conditionals(config)
    half = Fraction(1, 2)
    alice_first = config.order is MeasurementOrder.ALICE_FIRST

    def labeled(first_up: bool, second_up: bool) -> Label:
        if alice_first:
            return joint_label(first_up, second_up)
        return joint_label(second_up, first_up)

    probs = {
        labeled(True, True): half * c_up,
        labeled(True, False): half * (1 - c_up),
        labeled(False, True): half * c_down,
        labeled(False, False): half * (1 - c_down),
    }
    kernel = Kernel.from_probs({k: v for k, v in probs.items() if v > 0})
    return CollapseDetail(kernel, config, c_up, c_down, err)


def collapse_joint(config: ExperimentConfig) -> Kernel:
    """Joint kernel over {AuBu, AuBd, AdBu, AdBd}; zero-probability outcomes
    are omitted (equal filters anticorrelate perfectly, for instance)."""
    return collapse_detail(config).kernel


def intermediate_state(config: ExperimentConfig, first_up: bool) -> Angle:
    """Collapsed spin angle of the still-in-flight partner electron.

    This is the frame-dependent piece of the collapse picture: it depends on
    which measurement is taken to happen first, while the joint kernel does
    not. It is reported as data and never feeds probability computations.
    """
    first = config.first_filter()
    return first.opposite() if first_up else first


@dataclass(frozen=True)
class InvarianceReport:
    equal: bool
    alice_first: Kernel
    bob_first: Kernel


def order_invariance_check(
    alice: Angle, bob: Angle, max_denominator: int | None = None
) -> InvarianceReport:
    """Run the collapse in both orders and compare the joint kernels exactly."""
    kernels = []
    for order in (MeasurementOrder.ALICE_FIRST, MeasurementOrder.BOB_FIRST):
        config = ExperimentConfig(alice, bob, order, max_denominator)
        kernels.append(collapse_joint(config))
    return InvarianceReport(kernels[0] == kernels[1], kernels[0], kernels[1])
