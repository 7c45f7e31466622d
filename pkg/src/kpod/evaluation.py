"""Cluster-agreement scoring and wall-clock timing for benchmark runs."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, TypeVar

import numpy as np

from .errors import ShapeMismatchError
from .kmeans import Assignment

__all__ = [
    "PairCounts",
    "pair_counts",
    "rand_index",
    "adjusted_rand_index",
    "timing_harness",
]

T = TypeVar("T")


@dataclass(frozen=True)
class PairCounts:
    """How the C(n,2) object pairs fall across two partitions.

    ``same_same`` pairs share a cluster in both partitions, ``diff_diff`` in
    neither; the two mixed counts cover the disagreements. The four counts
    always sum to n(n-1)/2.
    """

    same_same: int
    same_diff: int
    diff_same: int
    diff_diff: int

    @property
    def total(self) -> int:
        return self.same_same + self.same_diff + self.diff_same + self.diff_diff


def _labels(a) -> np.ndarray:
    if isinstance(a, Assignment):
        return a.labels
    return Assignment(labels=np.asarray(a)).labels


def _comb2(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    return x * (x - 1) // 2


def pair_counts(a, b) -> PairCounts:
    """Count pair agreements via the label contingency table (O(n + k_a k_b))."""
    a, b = _labels(a), _labels(b)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"label lengths differ: {a.shape[0]} vs {b.shape[0]}")
    n = a.shape[0]
    if n < 2:
        raise ValueError("need at least two objects to compare partitions")
    ka, kb = int(a.max()) + 1, int(b.max()) + 1
    contingency = np.bincount(a * kb + b, minlength=ka * kb).reshape(ka, kb)
    same_same = int(_comb2(contingency).sum())
    same_a = int(_comb2(contingency.sum(axis=1)).sum())
    same_b = int(_comb2(contingency.sum(axis=0)).sum())
    total = n * (n - 1) // 2
    return PairCounts(
        same_same=same_same,
        same_diff=same_a - same_same,
        diff_same=same_b - same_same,
        diff_diff=total - same_a - same_b + same_same,
    )


def rand_index(a, b) -> float:
    """Fraction of object pairs on which two partitions agree.

    1 means the partitions are identical up to relabeling, 0 means no pair is
    treated the same way. Symmetric, and invariant to permuting either
    side's labels.
    """
    counts = pair_counts(a, b)
    return (counts.same_same + counts.diff_diff) / counts.total


def adjusted_rand_index(a, b) -> float:
    """Rand index corrected for chance agreement (Hubert-Arabie form).

    0 is the expected score of independent random partitions; 1 is perfect
    agreement. Identical partitions score 1 even in the degenerate all-same /
    all-singleton cases where the correction's denominator vanishes.
    """
    c = pair_counts(a, b)
    if c.same_diff == 0 and c.diff_same == 0:
        return 1.0
    numer = 2 * (c.same_same * c.diff_diff - c.same_diff * c.diff_same)
    denom = (c.same_same + c.same_diff) * (c.same_diff + c.diff_diff) + (
        c.same_same + c.diff_same
    ) * (c.diff_same + c.diff_diff)
    return numer / denom


def timing_harness(run: Callable[[], T]) -> tuple[T, float]:
    """Run a deferred computation and return (result, wall seconds).

    Uses a monotonic clock; time spent preparing inputs before the call is
    not counted.
    """
    start = time.perf_counter()
    result = run()
    return result, time.perf_counter() - start
