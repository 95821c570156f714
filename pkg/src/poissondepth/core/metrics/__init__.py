"""Evaluation protocol: depth and point metrics, metric recovery, mean ranks."""

from poissondepth.core.metrics.depth import DepthMetrics, depth_metrics, recover_metric
from poissondepth.core.metrics.points import (
    PointMetrics,
    affine_invariant_point_metrics,
    point_metrics,
)
from poissondepth.core.metrics.ranking import RankingResult, aggregate_ranking, metric_direction

__all__ = [
    "DepthMetrics",
    "PointMetrics",
    "RankingResult",
    "affine_invariant_point_metrics",
    "aggregate_ranking",
    "depth_metrics",
    "metric_direction",
    "point_metrics",
    "recover_metric",
]
