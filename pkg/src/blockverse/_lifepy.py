"""Fallback step kernels for the sparse Life plane, vectorized with numpy.

Cells travel as sorted, duplicate-free int64 arrays of packed coordinates
(see :mod:`blockverse.life` for the packing). Used when the compiled
``_lifecore`` extension is unavailable; same contract, same results.
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "python"

# Packed-key offsets of the 8 neighbors: (dp << 32) + dq.
_NEIGHBOR_SHIFTS = np.array(
    [(dp << 32) + dq for dp in (-1, 0, 1) for dq in (-1, 0, 1) if dp or dq],
    dtype=np.int64,
)


def _membership(queries: np.ndarray, live_sorted: np.ndarray) -> np.ndarray:
    """0/1 array: which query keys are live. Both inputs int64, live sorted."""
    if live_sorted.size == 0:
        return np.zeros(queries.size, dtype=np.int64)
    idx = np.searchsorted(live_sorted, queries)
    hit = idx < live_sorted.size
    hit[hit] = live_sorted[idx[hit]] == queries[hit]
    return hit.astype(np.int64)


def step_formula_packed(keys: np.ndarray) -> np.ndarray:
    """One step of the cell-update formula: the next state of a cell is live
    exactly when N <= 3 and (3 - State) <= N, with N the live count of the
    3x3 block around the cell minus the cell itself."""
    if keys.size == 0:
        return keys.copy()
    neighbors = (keys[:, None] + _NEIGHBOR_SHIFTS[None, :]).ravel()
    candidates = np.unique(np.concatenate([keys, neighbors]))
    n = np.zeros(candidates.size, dtype=np.int64)
    for shift in _NEIGHBOR_SHIFTS:
        n += _membership(candidates + shift, keys)
    state = _membership(candidates, keys)
    keep = (n <= 3) & ((3 - state) <= n)
    return candidates[keep]


def step_oracle_packed(keys: np.ndarray) -> np.ndarray:
    """One step of the textbook rule, computed a different way: tally each
    cell's live-neighbor count from neighbor emissions, then birth on exactly
    3 and survival on 2 or 3."""
    if keys.size == 0:
        return keys.copy()
    emitted = (keys[:, None] + _NEIGHBOR_SHIFTS[None, :]).ravel()
    cells, tallies = np.unique(emitted, return_counts=True)
    alive = _membership(cells, keys).astype(bool)
    keep = (tallies == 3) | ((tallies == 2) & alive)
    return cells[keep]
