"""Depth metrics and relative-to-metric recovery.

REL divides by the ground-truth depth. δ1 counts pixels with
``max(pred/gt, gt/pred) < 1.25``, strictly.
"""

import math

import numpy as np
from pydantic import BaseModel, Field

from poissondepth.core.align import apply_affine, global_affine_align
from poissondepth.core.errors import MetricsError, RasterValidationError
from poissondepth.core.types import DepthRaster, SparseDepth
from poissondepth.core.utils import ordered_sum

DELTA1_THRESHOLD = 1.25


class DepthMetrics(BaseModel):
    """Errors of a metric depth prediction over the jointly valid pixels."""

    rmse: float = Field(..., ge=0, description="Meters")
    mae: float = Field(..., ge=0, description="Meters")
    rel: float = Field(..., ge=0, description="Mean |pred - gt| / gt")
    delta1: float = Field(..., ge=0, le=1, description="Fraction with max ratio < 1.25")
    count: int = Field(..., ge=1, description="Evaluated pixels")


def depth_metrics(pred: DepthRaster, gt: DepthRaster) -> DepthMetrics:
    """RMSE, MAE, REL and δ1 with float64 row-major accumulation.

    Raises:
        MetricsError: no pixel is valid in both rasters
        RasterValidationError: dims differ, or gt is not positive on a joint pixel
    """
    if pred.shape != gt.shape:
        raise RasterValidationError(f"prediction dims {pred.shape} differ from gt {gt.shape}")
    m = pred.mask & gt.mask
    n = int(np.count_nonzero(m))
    if n == 0:
        raise MetricsError("prediction and ground truth have no jointly valid pixels")
    p = pred.data[m].astype(np.float64)
    g = gt.data[m].astype(np.float64)
    if not (g > 0).all():
        row, col = (int(v) for v in np.argwhere(m & ~(gt.data > 0))[0])
        raise RasterValidationError(
            f"ground truth is not positive at ({row},{col})", pixel=(row, col)
        )

    diff = p - g
    abs_diff = np.abs(diff)
    with np.errstate(divide="ignore"):
        ratio = np.maximum(p / g, g / p)
    return DepthMetrics(
        rmse=math.sqrt(ordered_sum(diff * diff) / n),
        mae=ordered_sum(abs_diff) / n,
        rel=ordered_sum(abs_diff / g) / n,
        delta1=int(np.count_nonzero(ratio < DELTA1_THRESHOLD)) / n,
        count=n,
    )


def recover_metric(pred_rel: DepthRaster, s: SparseDepth) -> DepthRaster:
    """Metric depth from a relative prediction by a global least-squares fit to s."""
    return apply_affine(pred_rel, global_affine_align(pred_rel, s))
