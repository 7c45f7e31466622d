"""Synthetic data generation and amputation.

Amputation deliberately hides entries of a complete matrix to simulate one of
the three standard missingness mechanisms:

* MCAR: hidden cells chosen uniformly over the whole matrix.
* MAR: hidden cells chosen uniformly, but only within a fixed set of columns
  (missingness depends on which variable a cell belongs to, not its value).
* NMAR: within each column, cells holding the smallest values are hidden
  (missingness depends on the value that goes missing).

All generators take the exact number of cells needed to land on the target
rate, so the achieved missingness matches the target up to rounding, and every
row and column is guaranteed to keep at least one observed entry.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError, QuantileFallbackWarning
from .kmeans import Assignment
from .masked import MaskedMatrix

__all__ = [
    "Mechanism",
    "MechanismSpec",
    "MixtureSpec",
    "simulate_mixture",
    "perturb_dataset",
    "ampute",
]


class Mechanism(enum.Enum):
    MCAR = "mcar"
    MAR = "mar"
    NMAR = "nmar"

    @classmethod
    def parse(cls, name: str) -> "Mechanism":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise InfeasibleError(
                f"unknown mechanism {name!r}; expected one of "
                + ", ".join(m.value for m in cls)
            ) from None


@dataclass(frozen=True)
class MechanismSpec:
    """Which mechanism to simulate, at what overall rate, with what seed."""

    kind: Mechanism
    target_rate: float
    mar_columns: tuple[int, ...] | None = None
    seed: int | None = None

    def __post_init__(self):
        if not 0 < self.target_rate < 1:
            raise ValueError(f"target_rate must be in (0, 1), got {self.target_rate}")
        if self.kind is Mechanism.MAR:
            if not self.mar_columns:
                raise ValueError("MAR requires a non-empty mar_columns")
            object.__setattr__(self, "mar_columns", tuple(int(c) for c in self.mar_columns))


@dataclass(frozen=True)
class MixtureSpec:
    """Gaussian mixture with isotropic components that differ only in their means.

    Component means are drawn i.i.d. N(0, center_sd^2) per coordinate; each row
    picks a component uniformly and adds N(0, noise_variance * I) noise.
    """

    n: int
    p: int
    k: int
    center_sd: float = 10.0
    noise_variance: float = 10.0
    seed: int | None = None

    def __post_init__(self):
        if min(self.n, self.p, self.k) < 1:
            raise ValueError("n, p, k must all be >= 1")
        # noise_variance 0 is allowed: rows then equal their component mean
        # exactly, which is the useful degenerate case for recovery tests.
        if self.center_sd < 0 or self.noise_variance < 0:
            raise ValueError("center_sd and noise_variance must be nonnegative")


def simulate_mixture(spec: MixtureSpec) -> tuple[np.ndarray, Assignment]:
    """Draw a complete (n, p) dataset and its generating labels."""
    rng = np.random.default_rng(spec.seed)
    means = rng.normal(0.0, spec.center_sd, size=(spec.k, spec.p))
    labels = rng.integers(spec.k, size=spec.n)
    noise = rng.normal(0.0, math.sqrt(spec.noise_variance), size=(spec.n, spec.p))
    return means[labels] + noise, Assignment(labels=labels)


def perturb_dataset(values, rel_sd: float, seed=None) -> np.ndarray:
    """Add per-column Gaussian noise with sd = rel_sd * |column mean|.

    Scaling the noise to each column's mean keeps the perturbation
    proportionate across variables of very different magnitudes. Columns whose
    mean is zero receive no noise.
    """
    values = np.asarray(values, dtype=float)
    if rel_sd < 0:
        raise ValueError("rel_sd must be >= 0")
    if rel_sd == 0:
        return values.copy()
    rng = np.random.default_rng(seed)
    scale = np.abs(rel_sd * values.mean(axis=0))
    return values + rng.standard_normal(values.shape) * scale


def _spread_counts(total: int, n_cols: int, rng: np.random.Generator) -> np.ndarray:
    """Split ``total`` cells over ``n_cols`` columns as evenly as possible."""
    base, extra = divmod(total, n_cols)
    counts = np.full(n_cols, base, dtype=np.int64)
    if extra:
        counts[rng.choice(n_cols, size=extra, replace=False)] += 1
    return counts


def _mask_mcar(shape: tuple[int, int], total: int, rng: np.random.Generator) -> np.ndarray:
    n, p = shape
    missing = np.zeros(n * p, dtype=bool)
    missing[rng.choice(n * p, size=total, replace=False)] = True
    return missing.reshape(n, p)


def _mask_mar(shape: tuple[int, int], total: int, columns: tuple[int, ...],
              rng: np.random.Generator) -> np.ndarray:
    n, p = shape
    cols = np.asarray(sorted(set(columns)), dtype=np.int64)
    if cols.size and (cols.min() < 0 or cols.max() >= p):
        raise InfeasibleError(f"mar_columns out of range for p={p}")
    capacity = n * cols.size
    if total > capacity:
        raise InfeasibleError(
            f"target rate needs {total} missing cells but the {cols.size} "
            f"MAR columns only hold {capacity}"
        )
    missing = np.zeros(shape, dtype=bool)
    flat = rng.choice(capacity, size=total, replace=False)
    missing[flat // cols.size, cols[flat % cols.size]] = True
    return missing


def _mask_nmar(values: np.ndarray, total: int, rng: np.random.Generator) -> np.ndarray:
    """Hide the smallest values in each column.

    Per column, the candidates are every cell at or below the column's
    bottom-quantile cutoff for the required count; the exact number of cells
    is then drawn at random from those candidates, so ties are broken fairly
    and the achieved rate is exact while masked cells still sit at the bottom
    of each column's distribution.
    """
    n, p = values.shape
    missing = np.zeros((n, p), dtype=bool)
    per_column = _spread_counts(total, p, rng)
    fell_back: list[int] = []
    for j in range(p):
        need = int(per_column[j])
        if need == 0:
            continue
        col = values[:, j]
        if np.unique(col).size < 2:
            fell_back.append(j)
        cutoff = np.sort(col)[need - 1]
        candidates = np.flatnonzero(col <= cutoff)
        if candidates.size > need:
            chosen = rng.choice(candidates, size=need, replace=False)
        else:
            chosen = candidates
        missing[chosen, j] = True
    if fell_back:
        warnings.warn(
            f"columns {fell_back} have a single distinct value; masked "
            "uniformly at random instead of by quantile",
            QuantileFallbackWarning,
            stacklevel=3,
        )
    return missing


def _keep_rows_and_columns_observed(missing: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Un-mask one uniformly chosen cell in any fully masked row or column."""
    n, p = missing.shape
    for i in np.flatnonzero(missing.all(axis=1)):
        missing[i, rng.integers(p)] = False
    for j in np.flatnonzero(missing.all(axis=0)):
        missing[rng.integers(n), j] = False
    return missing


def ampute(values, spec: MechanismSpec) -> MaskedMatrix:
    """Hide entries of a complete matrix according to ``spec``.

    The input array is never modified. The returned matrix stores 0.0 at the
    hidden cells (the mask is authoritative); oracles that need the hidden
    originals should keep the input array alongside the returned mask.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise InfeasibleError(f"expected a 2-D array, got shape {values.shape}")
    if not np.isfinite(values).all():
        raise InfeasibleError("amputation requires a complete (all finite) matrix")
    n, p = values.shape
    rng = np.random.default_rng(spec.seed)
    total = int(round(spec.target_rate * n * p))
    total = min(max(total, 0), n * p - 1)

    if spec.kind is Mechanism.MCAR:
        missing = _mask_mcar((n, p), total, rng)
    elif spec.kind is Mechanism.MAR:
        missing = _mask_mar((n, p), total, spec.mar_columns, rng)
    else:
        missing = _mask_nmar(values, total, rng)

    missing = _keep_rows_and_columns_observed(missing, rng)
    return MaskedMatrix(values=values, observed=~missing)
