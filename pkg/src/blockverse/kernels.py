"""Finite multisets of outcome-labeled universes with exact count-ratio probabilities.

A kernel maps each outcome label to a positive integer count of universes in
which that outcome happens; the probability of a predicate is the matching
count divided by the total. Independent events compose by tensor product,
repeated experiments by tensor powers. Counts are plain Python integers, so
nothing ever rounds: a kernel raised to the 100th power still answers
probability queries exactly.
"""

from __future__ import annotations

import math
import re
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "AllFactors",
    "Kernel",
    "KernelFormatError",
    "Label",
    "PowerKernel",
    "UnsupportedQuery",
    "as_label",
    "label_text",
    "match_count_distribution",
    "per_factor",
]

#: Outcome label: ordered tuple of per-event outcome tokens.
Label = tuple[str, ...]

Predicate = Callable[[Label], bool]

_TOKEN_RE = re.compile(r"[^\s,#]+\Z")


class UnsupportedQuery(ValueError):
    """Predicate cannot be answered on a symbolic tensor power."""


class KernelFormatError(ValueError):
    """Malformed kernel text."""


def as_label(value) -> Label:
    """Coerce a token string or an iterable of tokens into a Label tuple."""
    if isinstance(value, str):
        value = (value,)
    label = tuple(value)
    if not label:
        raise ValueError("outcome label must have at least one token")
    for token in label:
        if not isinstance(token, str) or not _TOKEN_RE.match(token):
            raise ValueError(f"bad outcome token {token!r} in label {label!r}")
    return label


def label_text(label: Label) -> str:
    """Render a label for display and the kernel text format."""
    return ",".join(label)


def _as_predicate(pred) -> Predicate:
    if callable(pred):
        return pred
    if isinstance(pred, (str, tuple)):
        target = as_label(pred)
        return lambda label: label == target
    if isinstance(pred, (set, frozenset, list)):
        targets = frozenset(as_label(p) for p in pred)
        return lambda label: label in targets
    raise TypeError(f"cannot interpret {pred!r} as an outcome predicate")


class Kernel:
    """Immutable multiset of outcome labels with positive integer counts."""

    __slots__ = ("_counts", "_total")

    def __init__(self, counts: Mapping):
        items = {}
        for raw_label, count in counts.items():
            label = as_label(raw_label)
            if label in items:
                raise ValueError(f"duplicate outcome label {label_text(label)!r}")
            if not isinstance(count, int) or isinstance(count, bool) or count < 1:
                raise ValueError(
                    f"count for {label_text(label)!r} must be a positive integer, got {count!r}"
                )
            items[label] = count
        if not items:
            raise ValueError("kernel must have at least one outcome")
        self._counts = dict(sorted(items.items()))
        self._total = sum(self._counts.values())

    @classmethod
    def from_probs(cls, dist: Mapping) -> "Kernel":
        """Kernel whose counts realize the given rational distribution exactly.

        Counts are probability * L with L the lcm of the denominators, the
        smallest universe count that gives every outcome an integer share.
        """
        probs = {as_label(k): Fraction(v) for k, v in dist.items()}
        if any(p <= 0 for p in probs.values()):
            raise ValueError("probabilities must be strictly positive")
        total = sum(probs.values())
        if total != 1:
            raise ValueError(f"probabilities must sum to exactly 1, got {total}")
        scale = math.lcm(*(p.denominator for p in probs.values()))
        return cls({label: int(p * scale) for label, p in probs.items()})

    @property
    def counts(self) -> dict[Label, int]:
        return dict(self._counts)

    @property
    def total(self) -> int:
        return self._total

    @property
    def outcomes(self) -> tuple[Label, ...]:
        return tuple(self._counts)

    def count(self, label) -> int:
        return self._counts.get(as_label(label), 0)

    def items(self):
        return self._counts.items()

    def __len__(self) -> int:
        return len(self._counts)

    def __eq__(self, other) -> bool:
        return isinstance(other, Kernel) and self._counts == other._counts

    def __hash__(self) -> int:
        return hash(tuple(self._counts.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{label_text(l)}: {c}" for l, c in self._counts.items())
        return f"Kernel({{{inner}}})"

    def is_canonical(self) -> bool:
        return math.gcd(*self._counts.values()) == 1

    def reduce(self) -> "Kernel":
        """Divide all counts by their gcd; every probability query is preserved."""
        g = math.gcd(*self._counts.values())
        if g == 1:
            return self
        return Kernel({label: c // g for label, c in self._counts.items()})

    def tensor(self, other: "Kernel") -> "Kernel":
        """Kernel of both events together: labels concatenate, counts multiply."""
        return Kernel(
            {
                a + b: ca * cb
                for a, ca in self._counts.items()
                for b, cb in other._counts.items()
            }
        )

    def power(self, n: int, materialize_limit: int = 10_000) -> "Kernel | PowerKernel":
        """n-fold tensor power; symbolic once the total exceeds materialize_limit."""
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"exponent must be a positive integer, got {n!r}")
        if self._total**n <= materialize_limit:
            out = self
            for _ in range(n - 1):
                out = out.tensor(self)
            return out
        return PowerKernel(self, n)

    def probability(self, predicate) -> Fraction:
        """Exact probability: matching universe count over total."""
        pred = _as_predicate(predicate)
        matched = sum(c for label, c in self._counts.items() if pred(label))
        return Fraction(matched, self._total)

    def marginal_probability(self, predicate) -> Fraction:
        return self.probability(predicate)

    def relabel(self, mapper: Callable[[Label], Label]) -> "Kernel":
        """Apply a bijective label transform (e.g. component reordering)."""
        out: dict[Label, int] = {}
        for label, c in self._counts.items():
            new = as_label(mapper(label))
            if new in out:
                raise ValueError(f"relabeling collides on {label_text(new)!r}")
            out[new] = c
        return Kernel(out)

    def enumerate_universes(self, cap: int = 1_000_000) -> list[Label]:
        """Explicit list of universes, each outcome repeated count times.

        Ordered by label, then repetition index, so output is reproducible.
        """
        if self._total > cap:
            raise ValueError(
                f"kernel total {self._total} exceeds enumeration cap {cap}"
            )
        out: list[Label] = []
        for label, c in self._counts.items():
            out.extend([label] * c)
        return out

    def to_text(self) -> str:
        lines = [f"#kernel v1 total={self._total}"]
        lines.extend(f"{label_text(label)}\t{c}" for label, c in self._counts.items())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Kernel":
        lines = [ln.rstrip("\n") for ln in text.splitlines()]
        lines = [ln for ln in lines if ln.strip()]
        if not lines or not lines[0].startswith("#kernel v1"):
            raise KernelFormatError("missing '#kernel v1' header line")
        header = lines[0]
        declared = None
        m = re.search(r"total=(\d+)", header)
        if m:
            declared = int(m.group(1))
        counts: dict[Label, int] = {}
        for ln in lines[1:]:
            if ln.startswith("#"):
                continue
            parts = ln.split("\t")
            if len(parts) != 2:
                raise KernelFormatError(f"expected 'LABEL<TAB>COUNT', got {ln!r}")
            try:
                label = as_label(parts[0].split(","))
                count = int(parts[1])
            except ValueError as exc:
                raise KernelFormatError(f"bad kernel line {ln!r}: {exc}") from exc
            if label in counts:
                raise KernelFormatError(f"duplicate label {parts[0]!r}")
            counts[label] = count
        try:
            kernel = cls(counts)
        except ValueError as exc:
            raise KernelFormatError(str(exc)) from exc
        if declared is not None and kernel.total != declared:
            raise KernelFormatError(
                f"header declares total={declared} but counts sum to {kernel.total}"
            )
        return kernel


@dataclass(frozen=True)
class AllFactors:
    """Predicate on a tensor power: the marginal holds in every factor."""

    marginal: object

    def base_predicate(self) -> Predicate:
        return _as_predicate(self.marginal)


@dataclass(frozen=True)
class PowerKernel:
    """Symbolic n-fold tensor power; answers per-factor marginal queries only."""

    base: Kernel
    exponent: int

    def __post_init__(self) -> None:
        if self.exponent < 1:
            raise ValueError("exponent must be >= 1")

    @property
    def total(self) -> int:
        return self.base.total**self.exponent

    def probability(self, predicate) -> Fraction:
        if not isinstance(predicate, AllFactors):
            raise UnsupportedQuery(
                "symbolic tensor powers answer AllFactors(marginal) queries only; "
                "materialize the kernel for arbitrary predicates"
            )
        return self.base.probability(predicate.base_predicate()) ** self.exponent

    def materialize(self) -> Kernel:
        return self.base.power(self.exponent, materialize_limit=self.total)


def per_factor(base: Kernel, marginal) -> Predicate:
    """Predicate on a materialized power of `base`: marginal true in every factor.

    Requires all base labels to share one arity so product labels chunk
    unambiguously back into factors.
    """
    arities = {len(label) for label in base.outcomes}
    if len(arities) != 1:
        raise ValueError("per-factor queries need uniform label arity in the base kernel")
    arity = arities.pop()
    pred = _as_predicate(marginal)

    def check(label: Label) -> bool:
        if len(label) % arity:
            raise ValueError(f"label {label!r} does not chunk into factors of arity {arity}")
        return all(pred(label[i : i + arity]) for i in range(0, len(label), arity))

    return check


def match_count_distribution(k: "Kernel | PowerKernel", marginal) -> dict[int, Fraction]:
    """Exact distribution of how many of the N factors satisfy the marginal.

    Each factor independently satisfies it with probability p, so the count
    is binomial: P(j) = C(N, j) p^j (1-p)^(N-j); the values sum to exactly 1.
    """
    if isinstance(k, PowerKernel):
        n, p = k.exponent, k.base.probability(_as_predicate(marginal))
    else:
        n, p = 1, k.probability(_as_predicate(marginal))
    return {
        j: Fraction(math.comb(n, j)) * p**j * (1 - p) ** (n - j) for j in range(n + 1)
    }
