"""Reading numeric tables, indicator streams and labelled datasets."""
from __future__ import annotations

import csv
import io
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)

__all__ = ["Table", "read_table", "parse_table", "read_stream", "parse_stream", "open_text"]


@dataclass
class Table:
    X: np.ndarray
    columns: list[str]
    labels: np.ndarray | None = None
    dropped: list[str] = field(default_factory=list)

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def open_text(path):
    """Text for ``path``; ``"-"`` or ``None`` read stdin."""
    if path is None or str(path) == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _resolve_column(spec, header: list[str] | None, width: int) -> int:
    if header is not None and spec in header:
        return header.index(spec)
    try:
        idx = int(spec)
    except (TypeError, ValueError):
        raise ValueError(f"label column {spec!r} not found") from None
    if idx < 0:
        idx += width
    if not 0 <= idx < width:
        raise ValueError(f"label column index {spec} out of range for {width} columns")
    return idx


def parse_table(text: str, label_column=None) -> Table:
    """Parse comma-separated numeric data.

    A header is assumed when the first row holds any non-numeric token.
    Columns containing non-numeric values are dropped with a warning; an
    empty or non-finite entry in a numeric column is an error.
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(t.strip() for t in r)]
    if not rows:
        return Table(np.zeros((0, 0)), [])
    rows = [[t.strip() for t in r] for r in rows]
    header = None
    if any(not _is_number(t) for t in rows[0]):
        header, rows = rows[0], rows[1:]
    width = len(header) if header is not None else len(rows[0]) if rows else 0
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ValueError(f"row {i + 1} has {len(r)} fields, expected {width}")
    names = header if header is not None else [str(i) for i in range(width)]

    label_idx = None if label_column is None else _resolve_column(label_column, header, width)
    cells = np.array(rows, dtype=str).reshape(len(rows), width)
    keep, dropped, columns = [], [], []
    for j in range(width):
        if j == label_idx:
            continue
        try:
            col = cells[:, j].astype(float)
        except ValueError:
            if any(t and not _is_number(t) for t in cells[:, j]):
                dropped.append(names[j])
                continue
            i = int(np.flatnonzero(cells[:, j] == "")[0])
            raise ValueError(f"missing value in row {i + 1}, column {names[j]!r}") from None
        bad = np.flatnonzero(~np.isfinite(col))
        if bad.size:
            raise ValueError(f"non-finite value in row {int(bad[0]) + 1}, column {names[j]!r}")
        keep.append(j)
        columns.append(col)
    if dropped:
        log.warning("dropping non-numeric columns: %s", ", ".join(dropped))

    X = np.column_stack(columns) if columns else np.zeros((len(rows), 0))
    labels = None
    if label_idx is not None:
        try:
            labels = np.array([int(float(r[label_idx])) for r in rows])
        except ValueError:
            raise ValueError("label column must hold 0/1 values") from None
        if np.any((labels != 0) & (labels != 1)):
            raise ValueError("label column must hold 0/1 values")
    return Table(X, [names[j] for j in keep], labels, dropped)


def read_table(path, label_column=None) -> Table:
    return parse_table(open_text(path), label_column)


def parse_stream(text: str) -> np.ndarray:
    """0/1 tokens, one per line; an optional non-numeric header line is skipped."""
    values = []
    seen_data = False
    for lineno, line in enumerate(text.splitlines(), 1):
        token = line.split(",")[0].strip()
        if not token:
            continue
        if token in ("0", "1"):
            values.append(int(token))
            seen_data = True
            continue
        if not seen_data and not _is_number(token):
            seen_data = True
            continue
        raise ValueError(f"line {lineno}: expected 0 or 1, got {token!r}")
    return np.array(values, dtype=np.int64)


def read_stream(path) -> np.ndarray:
    return parse_stream(open_text(path))
