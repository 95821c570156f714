"""Mean-rank aggregation of methods over evaluation cells."""

import math
from typing import Literal, Mapping, Optional

import numpy as np
from pydantic import BaseModel
from scipy.stats import rankdata

from poissondepth.core.errors import MetricsError

Direction = Literal["lower", "higher"]

# Metrics where a larger value is better; everything else ranks lower-is-better.
HIGHER_IS_BETTER = frozenset({"delta1", "delta1_p"})


class RankingResult(BaseModel):
    mean_ranks: dict[str, float]
    cells: list[str]
    cell_ranks: dict[str, dict[str, float]]


def metric_direction(cell: str) -> Direction:
    """Direction from the metric name, the last ``/``-separated part of a cell label."""
    return "higher" if cell.rsplit("/", 1)[-1] in HIGHER_IS_BETTER else "lower"


def aggregate_ranking(
    table: Mapping[str, Mapping[str, float]],
    directions: Optional[Mapping[str, Direction]] = None,
) -> RankingResult:
    """Rank methods per cell (1 = best, ties averaged) and average over cells.

    Args:
        table: method -> cell label -> value; every method needs every cell
        directions: per-cell override of ``metric_direction``

    Returns:
        RankingResult with per-method mean ranks, the cell list and per-cell ranks

    Raises:
        MetricsError: empty table, a missing cell or a non-finite value
    """
    if not table:
        raise MetricsError("ranking table has no methods")
    directions = directions or {}
    methods = list(table)
    cells: list[str] = []
    for method in methods:
        for cell in table[method]:
            if cell not in cells:
                cells.append(cell)
    if not cells:
        raise MetricsError("ranking table has no cells")

    cell_ranks: dict[str, dict[str, float]] = {}
    for cell in cells:
        values = []
        for method in methods:
            if cell not in table[method]:
                raise MetricsError(f"method {method!r} has no value for cell {cell!r}")
            value = float(table[method][cell])
            if not math.isfinite(value):
                raise MetricsError(f"method {method!r} has non-finite value in cell {cell!r}")
            values.append(value)
        keys = np.array(values)
        if directions.get(cell, metric_direction(cell)) == "higher":
            keys = -keys
        ranks = rankdata(keys, method="average")
        cell_ranks[cell] = {method: float(rank) for method, rank in zip(methods, ranks)}

    mean_ranks = {
        method: sum(cell_ranks[cell][method] for cell in cells) / len(cells) for method in methods
    }
    return RankingResult(mean_ranks=mean_ranks, cells=cells, cell_ranks=cell_ranks)
