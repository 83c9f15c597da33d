"""
Sampled metric curves and their tabular form.
"""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from wgslab.errors import DomainError


@dataclass
class MetricSeries:
    """
    Values sampled on a strictly increasing grid.

    Attributes:
        grid_name: Column name of the abscissa (t, alpha, theta, N or z)
        name: Column name of the primary values
        grid: Abscissa values
        values: Primary values, same length as grid
        extra: Additional per-point columns, kept in insertion order
        metadata: Model parameters the series was computed for
    """

    grid_name: str
    name: str
    grid: np.ndarray
    values: np.ndarray
    extra: dict[str, np.ndarray] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values)
        if self.grid.ndim != 1 or self.grid.size == 0:
            raise DomainError("A metric series needs a non-empty 1D grid")
        if self.values.shape != self.grid.shape:
            raise DomainError(
                f"Grid and values differ in length ({self.grid.size} vs {self.values.size})"
            )
        if np.any(np.diff(self.grid) <= 0):
            raise DomainError(f"Grid '{self.grid_name}' must be strictly increasing")
        for key, column in self.extra.items():
            column = np.asarray(column)
            if column.shape != self.grid.shape:
                raise DomainError(f"Column '{key}' does not match the grid length")
            self.extra[key] = column

    def __len__(self) -> int:
        return self.grid.size

    def to_frame(self) -> pd.DataFrame:
        """Grid, values, then extra columns."""
        columns = {self.grid_name: self.grid, self.name: self.values}
        columns.update(self.extra)
        return pd.DataFrame(columns)
