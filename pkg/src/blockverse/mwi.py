"""Viewer-dependent branching trees with exact weights and filament slicing.

A tree branches once per event, in whatever order a given viewer experiences
the events; node weights are exact rationals and children always partition
their parent. Slicing the tree into equal-weight filaments (one slice per
lcm-of-denominators share) turns it back into a kernel of stand-alone
universes, and that kernel is the same for every viewer order even though the
tree topologies differ. Dependent events are declared through a single joint
kernel and factored into conditionals along the chosen order, or through a
correlator callback supplying the conditional kernel for each event given the
outcomes so far.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .kernels import Kernel, Label, label_text

__all__ = [
    "BranchTree",
    "EventSpec",
    "InconsistentCorrelator",
    "InvarianceResult",
    "JointExperiment",
    "TreeNode",
    "build_tree",
    "build_tree_with_correlator",
    "correlator_invariance",
    "filament_decomposition",
    "tree_to_text",
    "viewer_invariance",
]

#: Conditional-kernel source: (event name, outcomes fixed so far) -> Kernel.
Correlator = Callable[[str, Mapping[str, str]], Kernel]


class InconsistentCorrelator(ValueError):
    """Conditional kernels whose implied joint depends on the event order."""


@dataclass(frozen=True)
class EventSpec:
    """A named branching event with its single-event outcome kernel."""

    name: str
    kernel: Kernel

    def __post_init__(self) -> None:
        if any(len(label) != 1 for label in self.kernel.outcomes):
            raise ValueError(f"event {self.name!r} needs single-token outcome labels")


@dataclass
class TreeNode:
    token: str | None  # outcome token taken at this branch; None at the root
    weight: Fraction
    children: list["TreeNode"] = field(default_factory=list)


@dataclass
class BranchTree:
    """Branching structure for one viewer order over the events."""

    root: TreeNode
    event_order: tuple[str, ...]

    def leaves(self) -> list[tuple[Label, Fraction]]:
        """(outcome tokens along the path, weight) for every leaf, in tree order."""
        out: list[tuple[Label, Fraction]] = []

        def walk(node: TreeNode, path: tuple[str, ...]) -> None:
            if node.token is not None:
                path = path + (node.token,)
            if not node.children:
                out.append((path, node.weight))
                return
            for child in node.children:
                walk(child, path)

        walk(self.root, ())
        return out

    def validate(self) -> None:
        """Check the partition invariants: children sum to parent, leaves to 1."""

        def walk(node: TreeNode, depth: int) -> None:
            if node.children:
                total = sum((c.weight for c in node.children), Fraction(0))
                if total != node.weight:
                    raise AssertionError(
                        f"children of {node.token!r} sum to {total}, parent {node.weight}"
                    )
                for child in node.children:
                    walk(child, depth + 1)
            elif depth != len(self.event_order):
                raise AssertionError(f"leaf at depth {depth}, expected {len(self.event_order)}")

        walk(self.root, 0)
        if sum((w for _, w in self.leaves()), Fraction(0)) != 1:
            raise AssertionError("leaf weights do not sum to 1")


def build_tree(events: Sequence[EventSpec]) -> BranchTree:
    """Tree for independent events, branching in the given order."""
    if not events:
        raise ValueError("at least one event is required")
    specs = {e.name: e.kernel for e in events}
    if len(specs) != len(events):
        raise ValueError("event names must be unique")
    order = tuple(e.name for e in events)
    return build_tree_with_correlator(order, lambda name, _prefix: specs[name])


def build_tree_with_correlator(order: Sequence[str], correlator: Correlator) -> BranchTree:
    """Tree branching along `order`, conditional weights from the correlator."""
    order = tuple(order)
    if not order:
        raise ValueError("at least one event is required")

    def grow(node: TreeNode, depth: int, prefix: dict[str, str]) -> None:
        if depth == len(order):
            return
        name = order[depth]
        kernel = correlator(name, dict(prefix))
        for label in kernel.outcomes:
            (token,) = label
            child = TreeNode(token, node.weight * kernel.probability(label))
            node.children.append(child)
            grow(child, depth + 1, {**prefix, name: token})

    root = TreeNode(None, Fraction(1))
    grow(root, 0, {})
    return BranchTree(root, order)


def filament_decomposition(tree: BranchTree, component_order: Sequence[str] | None = None) -> Kernel:
    """Slice the tree into equal-weight filaments and count them per outcome.

    With L the lcm of the leaf-weight denominators, a leaf of weight w yields
    w*L filaments; the result is a kernel with total L. Label components
    follow `component_order` when given (so trees built in different viewer
    orders can be compared), else the tree's own branching order.
    """
    leaves = tree.leaves()
    slices = math.lcm(*(w.denominator for _, w in leaves))
    counts: dict[Label, int] = {}
    reorder = _component_reorder(tree.event_order, component_order)
    for path, weight in leaves:
        count = weight * slices
        assert count.denominator == 1
        counts[reorder(path)] = int(count)
    return Kernel(counts)


def _component_reorder(
    from_order: Sequence[str], to_order: Sequence[str] | None
) -> Callable[[Label], Label]:
    if to_order is None or tuple(to_order) == tuple(from_order):
        return lambda label: label
    if sorted(to_order) != sorted(from_order):
        raise ValueError(f"orders name different events: {from_order} vs {to_order}")
    positions = [tuple(from_order).index(name) for name in to_order]
    return lambda label: tuple(label[i] for i in positions)


class JointExperiment:
    """Named events with a declared joint kernel over their combined outcomes.

    The joint is the single source of truth; each viewer order factors it
    into a marginal for the first event and conditionals for the rest.
    """

    def __init__(self, names: Sequence[str], joint: Kernel):
        names = tuple(names)
        if len(set(names)) != len(names) or not names:
            raise ValueError("event names must be nonempty and unique")
        if any(len(label) != len(names) for label in joint.outcomes):
            raise ValueError(
                f"joint labels need one component per event ({len(names)})"
            )
        self.names = names
        self.joint = joint

    @classmethod
    def independent(cls, events: Sequence[EventSpec]) -> "JointExperiment":
        joint = events[0].kernel
        for e in events[1:]:
            joint = joint.tensor(e.kernel)
        return cls([e.name for e in events], joint)

    def conditional(self, name: str, prefix: Mapping[str, str]) -> Kernel:
        """Outcome kernel for `name` given fixed outcomes of earlier events."""
        idx = self.names.index(name)
        fixed = {self.names.index(n): token for n, token in prefix.items()}
        counts: dict[Label, int] = {}
        for label, c in self.joint.items():
            if all(label[i] == tok for i, tok in fixed.items()):
                key = (label[idx],)
                counts[key] = counts.get(key, 0) + c
        if not counts:
            raise ValueError(f"no joint outcomes match prefix {dict(prefix)!r}")
        return Kernel(counts)

    def tree(self, order: Sequence[str] | None = None) -> BranchTree:
        return build_tree_with_correlator(order or self.names, self.conditional)

    def filament_kernel(self, order: Sequence[str] | None = None) -> Kernel:
        """Filament kernel for a viewer order, components in declaration order."""
        return filament_decomposition(self.tree(order), component_order=self.names)


@dataclass(frozen=True)
class InvarianceResult:
    equal: bool
    orders: tuple[tuple[str, ...], ...]
    trees: tuple[BranchTree, ...]
    kernels: tuple[Kernel, ...]


def viewer_invariance(
    experiment: JointExperiment,
    order1: Sequence[str] | None = None,
    order2: Sequence[str] | None = None,
) -> InvarianceResult:
    """Compare the filament kernels of two viewer orders exactly.

    Defaults to the declaration order against its reverse. For a declared
    joint this must come out equal; the sweep over all orders is
    :func:`correlator_invariance` with ``experiment.conditional``.
    """
    o1 = tuple(order1 or experiment.names)
    o2 = tuple(order2 or tuple(reversed(experiment.names)))
    trees = (experiment.tree(o1), experiment.tree(o2))
    kernels = tuple(
        filament_decomposition(t, component_order=experiment.names) for t in trees
    )
    return InvarianceResult(kernels[0] == kernels[1], (o1, o2), trees, kernels)


def correlator_invariance(
    names: Sequence[str],
    correlator: Correlator,
    orders: Sequence[Sequence[str]] | None = None,
) -> Kernel:
    """Decompose under every order and demand one filament kernel throughout.

    A correlator whose conditionals do not come from a single joint produces
    order-dependent kernels; that is a modeling fault, not a physics result,
    so it raises InconsistentCorrelator instead of returning False.
    """
    names = tuple(names)
    all_orders = [tuple(o) for o in (orders or permutations(names))]
    reference: Kernel | None = None
    ref_order: tuple[str, ...] = ()
    for order in all_orders:
        tree = build_tree_with_correlator(order, correlator)
        kernel = filament_decomposition(tree, component_order=names)
        if reference is None:
            reference, ref_order = kernel, order
        elif kernel != reference:
            raise InconsistentCorrelator(
                f"orders {ref_order} and {order} imply different joints: "
                f"{reference!r} vs {kernel!r}"
            )
    assert reference is not None
    return reference


def tree_to_text(tree: BranchTree) -> str:
    """Indented text rendering, stable for diffing between viewer orders."""
    lines = [f"#tree v1 order={','.join(tree.event_order)}"]

    def walk(node: TreeNode, depth: int) -> None:
        if node.token is None:
            lines.append("root 1")
        else:
            name = tree.event_order[depth - 1]
            lines.append(f"{'  ' * depth}{name}={node.token} {node.weight}")
        for child in node.children:
            walk(child, depth + 1)

    walk(tree.root, 0)
    return "\n".join(lines) + "\n"
