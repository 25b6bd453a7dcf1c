"""
shared/harness/table.py

In-memory result table produced by a sweep: named columns, rows in
row-major grid order (the first axis varies slowest).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass
class ResultTable:
    name: str
    columns: tuple[str, ...]
    axes: tuple[str, ...]
    rows: list[tuple[float, ...]] = field(default_factory=list)
    value_column: Optional[str] = None

    def __post_init__(self):
        missing = [a for a in self.axes if a not in self.columns]
        if missing:
            raise ValueError(f"Axis columns {missing} not in table columns {self.columns}")
        if self.value_column is not None and self.value_column not in self.columns:
            raise ValueError(f"Value column {self.value_column!r} not in table columns {self.columns}")
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise ValueError(f"Row {i} has {len(row)} values, expected {len(self.columns)}")

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise KeyError(f"No column {name!r} in {self.name}") from None
        return np.array([row[idx] for row in self.rows], dtype=float)

    def as_dicts(self) -> list[dict[str, float]]:
        return [dict(zip(self.columns, row)) for row in self.rows]

    def grid(self, value_column: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(x values, y values, values[x, y]) for a 2-axis table."""
        if len(self.axes) != 2:
            raise ValueError(f"Table {self.name} has {len(self.axes)} axis, a grid needs 2")
        xs = np.unique(self.column(self.axes[0]))
        ys = np.unique(self.column(self.axes[1]))
        if len(xs) * len(ys) != len(self.rows):
            raise ValueError(f"Table {self.name} is not a full {len(xs)} x {len(ys)} grid")
        return xs, ys, self.column(value_column).reshape(len(xs), len(ys))
