"""Unit tests for mean-rank aggregation."""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from poissondepth.core.errors import MetricsError
from poissondepth.core.metrics import aggregate_ranking, metric_direction


@pytest.fixture
def ranking_table():
    """Load the hand-ranked three-method table."""
    fixture_path = Path(__file__).parent.parent / "fixtures" / "ranking_table.json"
    with open(fixture_path) as f:
        return json.load(f)


def test_hand_ranked_table(ranking_table):
    """Test per-cell ranks and means against the hand computation."""
    result = aggregate_ranking(ranking_table["table"])

    assert result.cell_ranks == ranking_table["expected_cell_ranks"]
    assert result.mean_ranks == ranking_table["expected_mean_ranks"]
    assert result.cells == ["nyu/random/rel", "nyu/random/delta1"]


def test_single_method():
    """Test that a lone method always ranks first."""
    result = aggregate_ranking({"poisson": {"a/rel": 0.3, "b/rmse": 1.0}})
    assert result.mean_ranks == {"poisson": 1.0}


def test_total_dominance():
    """Test that a method better on every cell ranks 1 and the other 2."""
    table = {
        "poisson": {"x/rel": 0.05, "x/delta1": 0.99},
        "global": {"x/rel": 0.09, "x/delta1": 0.90},
    }
    assert aggregate_ranking(table).mean_ranks == {"poisson": 1.0, "global": 2.0}


def test_rank_sum_identity():
    """Test that ranks sum to M(M+1)/2 per cell and means stay in [1, M]."""
    rng = np.random.default_rng(0)
    methods = [f"m{i}" for i in range(5)]
    cells = [f"set/p{j}/rel" for j in range(7)]
    # Coarse values so that ties occur.
    table = {m: {c: float(rng.integers(0, 3)) for c in cells} for m in methods}

    result = aggregate_ranking(table)

    for cell in cells:
        assert sum(result.cell_ranks[cell].values()) == 15.0
    assert all(1.0 <= rank <= 5.0 for rank in result.mean_ranks.values())
    assert math.isclose(sum(result.mean_ranks.values()), 15.0)


def test_direction_override():
    """Test that an explicit direction wins over the metric name."""
    table = {"a": {"c/score": 2.0}, "b": {"c/score": 1.0}}

    assert aggregate_ranking(table).mean_ranks == {"a": 2.0, "b": 1.0}
    assert aggregate_ranking(table, {"c/score": "higher"}).mean_ranks == {"a": 1.0, "b": 2.0}


@pytest.mark.parametrize(
    "cell, direction",
    [("nyu/random/delta1", "higher"), ("kitti/lidar/delta1_p", "higher"), ("rel", "lower")],
)
def test_metric_direction(cell, direction):
    """Test direction inference from the last label component."""
    assert metric_direction(cell) == direction


def test_invalid_tables():
    """Test empty tables, missing cells and non-finite values."""
    with pytest.raises(MetricsError):
        aggregate_ranking({})
    with pytest.raises(MetricsError, match="no value for cell"):
        aggregate_ranking({"a": {"x/rel": 1.0}, "b": {"y/rel": 1.0}})
    with pytest.raises(MetricsError, match="non-finite"):
        aggregate_ranking({"a": {"x/rel": float("nan")}, "b": {"x/rel": 1.0}})
