"""Explicit finite ensembles of universe histories.

The primary mode is deterministic: a step partitions every class of
identical histories exactly in kernel proportions, which requires the kernel
total to divide each class size. Nothing is random at the ensemble level;
randomness only enters in the optional stochastic mode that models a single
observer's experience, and in the frequency sampler.

Shannon entropy of the class-size distribution measures how much information
the ensemble takes to describe. Deterministic steps only ever refine the
partition, so the entropy never decreases: the arrow of time, in ensemble form.

Sampling is reproducible by construction: draws come from numpy's Philox
counter-based generator keyed by ``SeedSequence(seed, spawn_key=(shard,))``,
so shard results are independent of execution order and merge to the same
counts serially or in parallel.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .kernels import Kernel, Label, label_text

__all__ = [
    "Ensemble",
    "IndivisibleEnsemble",
    "SampleResult",
    "arrow_run",
    "arrow_run_csv",
    "ensemble_init",
    "ensemble_step",
    "history_entropy",
    "sample_frequencies",
]

#: One universe's history: the outcome label of each completed event.
History = tuple[Label, ...]

_MAX_SAMPLED_TOTAL = 1 << 63


class IndivisibleEnsemble(ValueError):
    """A class size is not a multiple of the kernel total in deterministic mode."""

    def __init__(self, history: History, size: int, kernel_total: int, suggested: int):
        self.history = history
        self.size = size
        self.kernel_total = kernel_total
        self.suggested_size = suggested
        name = history_text(history) or "<initial>"
        super().__init__(
            f"class {name!r} has {size} universes, not divisible by kernel "
            f"total {kernel_total}; the least sufficient ensemble size is {suggested}"
        )


def history_text(history: History) -> str:
    return ";".join(label_text(label) for label in history)


@dataclass(frozen=True)
class Ensemble:
    """Immutable snapshot: class sizes keyed by history, constant total size."""

    classes: tuple[tuple[History, int], ...]

    @property
    def size(self) -> int:
        return sum(c for _, c in self.classes)

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    @property
    def steps(self) -> int:
        return len(self.classes[0][0]) if self.classes else 0

    def class_sizes(self) -> dict[History, int]:
        return dict(self.classes)


def _make_ensemble(sizes: Mapping[History, int]) -> Ensemble:
    return Ensemble(tuple(sorted(sizes.items())))


def ensemble_init(m: int) -> Ensemble:
    """M universes with identical (empty) histories: one class, zero entropy."""
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"ensemble size must be a positive integer, got {m!r}")
    return _make_ensemble({(): m})


def ensemble_step(ens: Ensemble, kernel: Kernel, rng: np.random.Generator | None = None) -> Ensemble:
    """Extend every history by one event.

    Deterministic mode (no rng): each class splits exactly in kernel
    proportions, class_size * count / total members per outcome. Stochastic
    mode (rng given): each universe draws its outcome independently.
    """
    if rng is None:
        return _step_deterministic(ens, kernel)
    return _step_stochastic(ens, kernel, rng)


def _step_deterministic(ens: Ensemble, kernel: Kernel) -> Ensemble:
    total = kernel.total
    bad = [(h, s) for h, s in ens.classes if s % total]
    if bad:
        factor = math.lcm(*(total // math.gcd(total, s) for _, s in ens.classes))
        history, size = bad[0]
        raise IndivisibleEnsemble(history, size, total, ens.size * factor)
    sizes: dict[History, int] = {}
    for history, size in ens.classes:
        share = size // total
        for label, count in kernel.items():
            sizes[history + (label,)] = share * count
    return _make_ensemble(sizes)


def _step_stochastic(ens: Ensemble, kernel: Kernel, rng: np.random.Generator) -> Ensemble:
    labels, boundaries, total = _cumulative(kernel)
    sizes: dict[History, int] = {}
    for history, size in ens.classes:
        draws = rng.integers(0, total, size=size, dtype=np.uint64)
        picks = np.searchsorted(boundaries, draws, side="right")
        for idx, n in enumerate(np.bincount(picks, minlength=len(labels))):
            if n:
                sizes[history + (labels[idx],)] = sizes.get(history + (labels[idx],), 0) + int(n)
    return _make_ensemble(sizes)


def history_entropy(ens: Ensemble) -> float:
    """Shannon entropy of the class-size distribution, in bits."""
    m = ens.size
    return -sum((s / m) * math.log2(s / m) for _, s in ens.classes)


def arrow_run(kernel: Kernel, m: int, steps: int) -> list[tuple[int, float, int]]:
    """(step, entropy_bits, num_classes) rows for a deterministic run."""
    ens = ensemble_init(m)
    rows = [(0, history_entropy(ens), ens.num_classes)]
    for k in range(1, steps + 1):
        ens = ensemble_step(ens, kernel)
        rows.append((k, history_entropy(ens), ens.num_classes))
    return rows


def arrow_run_csv(kernel: Kernel, m: int, steps: int) -> str:
    lines = ["step,entropy_bits,num_classes"]
    lines.extend(f"{k},{h!r},{c}" for k, h, c in arrow_run(kernel, m, steps))
    return "\n".join(lines) + "\n"


def _cumulative(kernel: Kernel) -> tuple[list[Label], np.ndarray, int]:
    if kernel.total >= _MAX_SAMPLED_TOTAL:
        raise ValueError(
            f"kernel total {kernel.total} is too large to sample (>= 2^63)"
        )
    labels = list(kernel.outcomes)
    counts = np.array([kernel.count(l) for l in labels], dtype=np.uint64)
    return labels, np.cumsum(counts), kernel.total


@dataclass(frozen=True)
class SampleResult:
    """Empirical counts from n seeded draws, with the exact targets alongside."""

    kernel: Kernel
    n: int
    seed: int
    shards: int
    counts: dict[Label, int]

    def frequency(self, label) -> float:
        return self.counts[label if isinstance(label, tuple) else (label,)] / self.n

    def exact_probability(self, label) -> Fraction:
        return Fraction(self.kernel.count(label), self.kernel.total)

    def max_deviation(self) -> float:
        return max(
            abs(self.frequency(l) - float(self.exact_probability(l)))
            for l in self.kernel.outcomes
        )

    def to_csv(self) -> str:
        lines = ["outcome,count,frequency,exact_probability"]
        for label in self.kernel.outcomes:
            p = self.exact_probability(label)
            lines.append(
                f"{label_text(label)},{self.counts[label]},{self.frequency(label)!r},{p.numerator}/{p.denominator}"
            )
        return "\n".join(lines) + "\n"


def _shard_generator(seed: int, shard: int) -> np.random.Generator:
    # Philox is counter-based: the (seed, shard) key pins the whole stream.
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(shard,))))


def _shard_quota(n: int, shards: int, shard: int) -> int:
    return n // shards + (1 if shard < n % shards else 0)


def sample_shard(kernel: Kernel, n: int, seed: int, shards: int, shard: int) -> np.ndarray:
    """Outcome counts contributed by one shard; safe to run concurrently."""
    labels, boundaries, total = _cumulative(kernel)
    quota = _shard_quota(n, shards, shard)
    rng = _shard_generator(seed, shard)
    draws = rng.integers(0, total, size=quota, dtype=np.uint64)
    picks = np.searchsorted(boundaries, draws, side="right")
    return np.bincount(picks, minlength=len(labels))


def sample_frequencies(kernel: Kernel, n: int, seed: int, shards: int = 1) -> SampleResult:
    """n independent draws in kernel proportions, bit-reproducible per seed.

    Draws are uniform integers below the kernel total bucketed by cumulative
    counts, so the target proportions are exact, not float-rounded. The work
    splits into `shards` independent substreams whose merged counts do not
    depend on execution order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    labels = list(kernel.outcomes)
    merged = np.zeros(len(labels), dtype=np.int64)
    for shard in range(shards):
        merged += sample_shard(kernel, n, seed, shards, shard)
    counts = {label: int(c) for label, c in zip(labels, merged)}
    return SampleResult(kernel, n, seed, shards, counts)
