"""Point-wise metrics over 3D point maps.

REL^p divides by ‖gt‖. δ1^p counts points with ``‖pred - gt‖ < 0.25·min(‖pred‖, ‖gt‖)``.
"""

import math

import numpy as np
from pydantic import BaseModel, Field

from poissondepth.core.errors import MetricsError, RasterValidationError
from poissondepth.core.geometry import affine_invariant_align, apply_point_affine
from poissondepth.core.types import PointMap
from poissondepth.core.utils import ordered_sum

POINT_DELTA_RATIO = 0.25


class PointMetrics(BaseModel):
    rmse_p: float = Field(..., ge=0, description="Meters")
    mae_p: float = Field(..., ge=0, description="Meters")
    rel_p: float = Field(..., ge=0, description="Mean ‖pred - gt‖ / ‖gt‖")
    delta1_p: float = Field(..., ge=0, le=1)
    count: int = Field(..., ge=1)


def _norms(xyz: np.ndarray) -> np.ndarray:
    return np.sqrt(xyz[:, 0] * xyz[:, 0] + xyz[:, 1] * xyz[:, 1] + xyz[:, 2] * xyz[:, 2])


def point_metrics(pred: PointMap, gt: PointMap) -> PointMetrics:
    """Euclidean analogues of the depth metrics over jointly valid points."""
    if pred.shape != gt.shape:
        raise RasterValidationError(f"point map dims differ: {pred.shape} vs {gt.shape}")
    m = pred.mask & gt.mask
    n = int(np.count_nonzero(m))
    if n == 0:
        raise MetricsError("point maps have no jointly valid pixels")
    p = pred.xyz[m]
    g = gt.xyz[m]
    gt_norm = _norms(g)
    if not (gt_norm > 0).all():
        raise MetricsError("ground-truth point at the camera center on a valid pixel")

    d = p - g
    squared = d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1] + d[:, 2] * d[:, 2]
    dist = np.sqrt(squared)
    near = dist < POINT_DELTA_RATIO * np.minimum(_norms(p), gt_norm)
    return PointMetrics(
        rmse_p=math.sqrt(ordered_sum(squared) / n),
        mae_p=ordered_sum(dist) / n,
        rel_p=ordered_sum(dist / gt_norm) / n,
        delta1_p=int(np.count_nonzero(near)) / n,
        count=n,
    )


def affine_invariant_point_metrics(pred: PointMap, gt: PointMap) -> PointMetrics:
    """Point metrics after the best scale and translation of pred onto gt."""
    alpha, beta = affine_invariant_align(pred, gt)
    return point_metrics(apply_point_affine(pred, alpha, beta), gt)
