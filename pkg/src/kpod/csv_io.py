"""CSV ingestion and emission with missing-value conventions.

Missing entries are empty cells or a missing token ("NA" by default) on read,
and the token on write. Floats are written with ``repr`` so a write/read
round trip preserves every observed value bit for bit.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import CsvParseError
from .kmeans import Assignment
from .masked import MaskedMatrix

__all__ = [
    "read_masked_csv",
    "write_masked_csv",
    "read_labels_csv",
    "write_labels_csv",
]

DEFAULT_MISSING_TOKEN = "NA"


def _fmt(value: float) -> str:
    return repr(float(value))


def read_masked_csv(path, missing_token: str = DEFAULT_MISSING_TOKEN,
                    has_header: bool = True, label_column: str | None = None,
                    ) -> tuple[MaskedMatrix, Assignment | None]:
    """Read a rectangular numeric CSV into a masked matrix.

    Empty cells and cells equal to ``missing_token`` become unobserved. If
    ``label_column`` names a header column, that column is pulled out as
    ground-truth labels (distinct values coded 0..k-1 in sorted order) and
    excluded from the features. Parse problems raise :class:`CsvParseError`
    with a 1-based file line and column.
    """
    path = Path(path)
    with path.open(newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows:
        raise CsvParseError(f"{path}: file is empty")

    header: list[str] | None = None
    first_data_line = 1
    if has_header:
        header = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
        first_data_line = 2
        if not rows:
            raise CsvParseError(f"{path}: no data rows after header")

    label_idx: int | None = None
    if label_column is not None:
        if header is None:
            raise CsvParseError(f"{path}: label_column requires a header row")
        if label_column not in header:
            raise CsvParseError(
                f"{path}: no column named {label_column!r}; columns are {header}"
            )
        label_idx = header.index(label_column)

    width = len(rows[0])
    values = np.zeros((len(rows), width - (label_idx is not None)), dtype=float)
    observed = np.ones_like(values, dtype=bool)
    raw_labels: list[str] = []
    for i, row in enumerate(rows):
        line = first_data_line + i
        if len(row) != width:
            raise CsvParseError(
                f"{path}: expected {width} fields, got {len(row)}", line=line
            )
        j_out = 0
        for j, cell in enumerate(row):
            cell = cell.strip()
            if j == label_idx:
                if cell == "" or cell == missing_token:
                    raise CsvParseError(f"{path}: missing label", line=line, column=j + 1)
                raw_labels.append(cell)
                continue
            if cell == "" or cell == missing_token:
                observed[i, j_out] = False
            else:
                try:
                    parsed = float(cell)
                except ValueError:
                    raise CsvParseError(
                        f"{path}: non-numeric cell {cell!r}", line=line, column=j + 1
                    ) from None
                if not math.isfinite(parsed):
                    raise CsvParseError(
                        f"{path}: non-finite cell {cell!r}", line=line, column=j + 1
                    )
                values[i, j_out] = parsed
            j_out += 1

    labels = None
    if label_idx is not None:
        codes = {value: code for code, value in enumerate(sorted(set(raw_labels)))}
        labels = Assignment(labels=np.array([codes[v] for v in raw_labels]))
    return MaskedMatrix(values=values, observed=observed), labels


def write_masked_csv(x: MaskedMatrix, path, missing_token: str = DEFAULT_MISSING_TOKEN,
                     header: Sequence[str] | None = None) -> None:
    """Write a masked matrix as CSV, one header row then one row per sample."""
    if header is None:
        header = [f"x{j}" for j in range(x.n_cols)]
    elif len(header) != x.n_cols:
        raise CsvParseError(f"header has {len(header)} names for {x.n_cols} columns")
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for i in range(x.n_rows):
            writer.writerow([
                _fmt(x.values[i, j]) if x.observed[i, j] else missing_token
                for j in range(x.n_cols)
            ])


def read_labels_csv(path) -> Assignment:
    """Read a single-column label CSV (header row, then one label per row)."""
    path = Path(path)
    with path.open(newline="") as handle:
        rows = list(csv.reader(handle))
    if len(rows) < 2:
        raise CsvParseError(f"{path}: expected a header row and at least one label")
    raw = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != 1:
            raise CsvParseError(f"{path}: expected one field", line=i)
        raw.append(row[0].strip())
    codes = {value: code for code, value in enumerate(sorted(set(raw)))}
    return Assignment(labels=np.array([codes[v] for v in raw]))


def write_labels_csv(labels: Assignment, path, column_name: str = "label") -> None:
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow([column_name])
        for label in labels.labels:
            writer.writerow([int(label)])
