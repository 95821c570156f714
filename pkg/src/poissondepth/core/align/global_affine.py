"""Global least-squares scale/shift alignment of relative depth to sparse anchors."""

import numpy as np
import structlog

from poissondepth.core.errors import AlignmentError
from poissondepth.core.types import AffineParams, DepthRaster, SparseDepth
from poissondepth.core.utils.reduction import ordered_sum

logger = structlog.get_logger(__name__)


def anchor_pairs(d_r: DepthRaster, s: SparseDepth) -> tuple[np.ndarray, np.ndarray]:
    """Relative values and metric depths at the anchors, in row-major anchor order.

    Sorting makes every downstream reduction independent of the anchor list order.
    """
    s.validate()
    if s.shape != d_r.shape:
        raise AlignmentError(f"sparse dims {s.shape} differ from raster dims {d_r.shape}")
    ordered = s.sorted()
    valid = d_r.mask[ordered.rows, ordered.cols]
    if not valid.all():
        i = int(np.flatnonzero(~valid)[0])
        raise AlignmentError(
            f"relative depth is invalid at anchor ({ordered.rows[i]},{ordered.cols[i]})"
        )
    x = d_r.data[ordered.rows, ordered.cols].astype(np.float64)
    return x, ordered.depths


def fit_affine(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Closed-form least squares for ``y ≈ alpha * x + beta`` in float64.

    Solves the 2×2 normal equations in centered form, which has the same minimizer
    and avoids cancellation in Σx² − (Σx)²/n.
    """
    n = x.size
    if n < 2:
        raise AlignmentError(f"need at least 2 anchors, got {n}")
    if np.all(x == x[0]):
        raise AlignmentError("relative depth has zero variance over the anchors")

    mean_x = ordered_sum(x) / n
    mean_y = ordered_sum(y) / n
    dx = x - mean_x
    sxx = ordered_sum(dx * dx)
    sxy = ordered_sum(dx * (y - mean_y))
    if sxx == 0.0:
        raise AlignmentError("relative depth has zero variance over the anchors")
    alpha = sxy / sxx
    beta = mean_y - alpha * mean_x
    return alpha, beta


def global_affine_align(d_r: DepthRaster, s: SparseDepth) -> AffineParams:
    """Fit the global affine transform that best maps relative depth onto the anchors.

    Raises:
        AlignmentError: fewer than 2 anchors, zero relative variance over the anchors,
            or a non-positive fitted scale (relative depth anti-correlated with metric).
    """
    x, y = anchor_pairs(d_r, s)
    alpha, beta = fit_affine(x, y)
    if not alpha > 0:
        raise AlignmentError(
            f"fitted scale alpha={alpha:.6g} is not positive; relative depth is "
            "anti-correlated with the metric anchors"
        )
    params = AffineParams(alpha=alpha, beta=beta)
    logger.debug("Global affine fitted", anchors=int(x.size), alpha=alpha, beta=beta)
    return params


def apply_affine(d_r: DepthRaster, p: AffineParams) -> DepthRaster:
    """Map relative depth to meters; pixels whose result is not positive become invalid."""
    metric = (p.alpha * d_r.data.astype(np.float64) + p.beta).astype(np.float32)
    with np.errstate(invalid="ignore"):
        mask = d_r.mask & np.isfinite(metric) & (metric > 0)
    dropped = int(np.count_nonzero(d_r.mask & ~mask))
    if dropped:
        logger.warning("Affine result non-positive", pixels=dropped, alpha=p.alpha, beta=p.beta)
    return DepthRaster(data=metric, mask=mask, unit="meters")
