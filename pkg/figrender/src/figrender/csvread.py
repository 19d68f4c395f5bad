"""Reader for the versioned CSV files written by the phasekit CLI.

Format: a "# phasekit v1" first line, "# key=value" metadata lines (one of
them, "# columns=...", names the data fields), then comma-separated float
rows.  Values are parsed with float() and kept untouched, so what the caller
plots is bit for bit what the file holds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HEADER = "# phasekit v1"


class FormatError(Exception):
    """A CSV file does not follow the documented format."""


@dataclass(frozen=True)
class Dataset:
    """One parsed CSV: metadata, column names, and the numeric table."""

    path: str
    meta: dict
    columns: tuple
    table: np.ndarray

    def column(self, name: str) -> np.ndarray:
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise FormatError(
                f"{self.path}: no column named {name!r}; file has {', '.join(self.columns)}"
            ) from None
        return self.table[:, idx]


def read_csv(path) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].strip():
        raise FormatError(f"{path}: line 1: empty file")
    if lines[0] != HEADER:
        raise FormatError(f"{path}: line 1: expected {HEADER!r}, got {lines[0]!r}")

    meta: dict = {}
    rows = []
    row_width = None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if line.startswith("#"):
            if rows:
                raise FormatError(f"{path}: line {lineno}: metadata after data rows")
            key, sep, value = line[1:].strip().partition("=")
            if not sep or not key.strip():
                raise FormatError(f"{path}: line {lineno}: metadata is not 'key=value'")
            meta[key.strip()] = value
            continue
        parts = line.split(",")
        if row_width is None:
            row_width = len(parts)
        elif len(parts) != row_width:
            raise FormatError(
                f"{path}: line {lineno}: expected {row_width} fields, got {len(parts)}"
            )
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise FormatError(f"{path}: line {lineno}: malformed number") from None

    if "columns" not in meta:
        raise FormatError(f"{path}: missing '# columns=' metadata line")
    columns = tuple(name.strip() for name in meta["columns"].split(","))
    if len(columns) < 2:
        raise FormatError(f"{path}: needs at least two columns, has {meta['columns']!r}")
    if not rows:
        raise FormatError(f"{path}: no data rows")
    if row_width != len(columns):
        raise FormatError(
            f"{path}: rows have {row_width} fields but '# columns=' names {len(columns)}"
        )
    return Dataset(str(path), meta, columns, np.array(rows, dtype=float))
