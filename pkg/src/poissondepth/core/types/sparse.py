"""Sparse metric depth observations (anchors)."""

from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np
from numpy.typing import ArrayLike

from poissondepth.core.errors import SparseDepthError


@dataclass(frozen=True, eq=False)
class SparseDepth:
    """Set of (row, col, depth) observations on an H×W pixel grid.

    Depths are meters in float64. ``warnings`` records non-fatal degradations from the
    sampler that produced the set and takes no part in equality.
    """

    rows: np.ndarray
    cols: np.ndarray
    depths: np.ndarray
    shape: tuple[int, int]
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.int64).reshape(-1)
        cols = np.array(self.cols, dtype=np.int64).reshape(-1)
        depths = np.array(self.depths, dtype=np.float64).reshape(-1)
        if not (rows.size == cols.size == depths.size):
            raise SparseDepthError(
                f"entry arrays differ in length: {rows.size}, {cols.size}, {depths.size}"
            )
        for array in (rows, cols, depths):
            array.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "depths", depths)
        object.__setattr__(self, "shape", (int(self.shape[0]), int(self.shape[1])))
        object.__setattr__(self, "warnings", tuple(self.warnings))

    @classmethod
    def from_entries(
        cls,
        entries: Iterable[tuple[int, int, float]],
        shape: tuple[int, int],
    ) -> "SparseDepth":
        entries = list(entries)
        if not entries:
            return cls.empty(shape)
        rows, cols, depths = zip(*entries)
        return cls(rows=rows, cols=cols, depths=depths, shape=shape)

    @classmethod
    def empty(cls, shape: tuple[int, int]) -> "SparseDepth":
        return cls(rows=[], cols=[], depths=[], shape=shape)

    def __len__(self) -> int:
        return int(self.rows.size)

    def __iter__(self) -> Iterator[tuple[int, int, float]]:
        return iter(self.entries())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseDepth):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and np.array_equal(self.depths, other.depths)
        )

    __hash__ = None  # type: ignore[assignment]

    def entries(self) -> list[tuple[int, int, float]]:
        return [
            (int(r), int(c), float(d)) for r, c, d in zip(self.rows, self.cols, self.depths)
        ]

    def flat_indices(self) -> np.ndarray:
        """Row-major pixel indices of the entries."""
        return self.rows * self.shape[1] + self.cols

    def validate(self) -> None:
        """Raise SparseDepthError unless coordinates are in bounds and unique and depths > 0."""
        height, width = self.shape
        if height < 1 or width < 1:
            raise SparseDepthError(f"invalid source dims {self.shape}")
        out = (self.rows < 0) | (self.rows >= height) | (self.cols < 0) | (self.cols >= width)
        if out.any():
            i = int(np.flatnonzero(out)[0])
            raise SparseDepthError(
                f"entry {i} at ({self.rows[i]},{self.cols[i]}) is out of bounds for {self.shape}"
            )
        flat = self.flat_indices()
        unique, counts = np.unique(flat, return_counts=True)
        if unique.size != flat.size:
            dup = int(unique[np.flatnonzero(counts > 1)[0]])
            raise SparseDepthError(f"duplicate pixel ({dup // width},{dup % width})")
        bad = ~np.isfinite(self.depths) | (self.depths <= 0)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise SparseDepthError(
                f"entry {i} at ({self.rows[i]},{self.cols[i]}) has invalid depth {self.depths[i]}"
            )

    def sorted(self) -> "SparseDepth":
        """Copy with entries in row-major order."""
        order = np.argsort(self.flat_indices(), kind="stable")
        return self.take(order)

    def take(self, indices: ArrayLike) -> "SparseDepth":
        indices = np.asarray(indices, dtype=np.int64)
        return SparseDepth(
            rows=self.rows[indices],
            cols=self.cols[indices],
            depths=self.depths[indices],
            shape=self.shape,
            warnings=self.warnings,
        )

    def with_depths(self, depths: ArrayLike) -> "SparseDepth":
        return SparseDepth(
            rows=self.rows, cols=self.cols, depths=depths, shape=self.shape, warnings=self.warnings
        )

    def scaled(self, factor: float) -> "SparseDepth":
        return self.with_depths(self.depths * factor)
