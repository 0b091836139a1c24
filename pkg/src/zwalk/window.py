"""Finite integer-indexed sequences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator

import numpy as np

from .errors import IndexOutOfWindow


@dataclass(frozen=True)
class Seq:
    """Values ``values[k]`` stored at integer index ``start + k``."""

    values: tuple
    start: int

    @classmethod
    def from_dict(cls, d: dict[int, Any]) -> "Seq":
        lo, hi = min(d), max(d)
        return cls(tuple(d[n] for n in range(lo, hi + 1)), lo)

    @property
    def stop(self) -> int:
        """Last valid index (inclusive)."""
        return self.start + len(self.values) - 1

    @property
    def window(self) -> tuple[int, int]:
        return (self.start, self.stop)

    def __getitem__(self, n: int):
        k = n - self.start
        if k < 0 or k >= len(self.values):
            raise IndexOutOfWindow(n, self.window)
        return self.values[k]

    def __contains__(self, n: int) -> bool:
        return self.start <= n <= self.stop

    def __len__(self) -> int:
        return len(self.values)

    def indices(self) -> range:
        return range(self.start, self.stop + 1)

    def items(self) -> Iterator[tuple[int, Any]]:
        return zip(self.indices(), self.values)

    def restrict(self, lo: int, hi: int) -> "Seq":
        if lo < self.start or hi > self.stop:
            raise IndexOutOfWindow(lo if lo < self.start else hi, self.window)
        return Seq(self.values[lo - self.start : hi - self.start + 1], lo)

    def as_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])
