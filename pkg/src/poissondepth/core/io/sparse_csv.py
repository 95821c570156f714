"""Sparse depth observations as ``row,col,depth_m`` CSV."""

import csv
import math
from pathlib import Path
from typing import Union

from poissondepth.core.errors import FormatError
from poissondepth.core.types import SparseDepth

PathLike = Union[str, Path]

HEADER = ["row", "col", "depth_m"]


def read_sparse_csv(path: PathLike, shape: tuple[int, int]) -> SparseDepth:
    """Parse and validate entries against the raster dims they belong to.

    Errors name the 1-based file line; the header is line 1. Blank lines are skipped.
    """
    path = Path(path)
    height, width = shape
    rows: list[int] = []
    cols: list[int] = []
    depths: list[float] = []
    first_seen: dict[tuple[int, int], int] = {}

    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != HEADER:
            raise FormatError(path, f"header must be {','.join(HEADER)}", line=1)
        for record in reader:
            line = reader.line_num
            if not record:
                continue
            if len(record) != 3:
                raise FormatError(path, f"expected 3 fields, got {len(record)}", line=line)
            try:
                row, col = int(record[0]), int(record[1])
                depth = float(record[2])
            except ValueError as e:
                raise FormatError(path, f"cannot parse {','.join(record)!r}", line=line) from e
            if not (0 <= row < height and 0 <= col < width):
                raise FormatError(
                    path, f"pixel ({row},{col}) is out of bounds for {height}x{width}", line=line
                )
            if not (math.isfinite(depth) and depth > 0):
                raise FormatError(path, f"depth {record[2]!r} is not a positive number", line=line)
            if (row, col) in first_seen:
                raise FormatError(
                    path,
                    f"duplicate pixel ({row},{col}), first on line {first_seen[(row, col)]}",
                    line=line,
                )
            first_seen[(row, col)] = line
            rows.append(row)
            cols.append(col)
            depths.append(depth)

    return SparseDepth(rows=rows, cols=cols, depths=depths, shape=(height, width))


def write_sparse_csv(path: PathLike, s: SparseDepth) -> None:
    """Write entries in their stored order; depths use the shortest exact repr."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(HEADER)
        for row, col, depth in s.entries():
            writer.writerow([row, col, repr(depth)])
