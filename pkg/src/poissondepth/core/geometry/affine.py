"""Affine-invariant alignment of point maps (scalar scale, 3-vector shift)."""

import numpy as np
import structlog

from poissondepth.core.errors import AlignmentError, RasterValidationError
from poissondepth.core.types import PointMap
from poissondepth.core.utils import ordered_sum

logger = structlog.get_logger(__name__)


def affine_invariant_align(p: PointMap, p_hat: PointMap) -> tuple[float, np.ndarray]:
    """Least-squares ``(alpha_p, beta_p)`` minimizing ``Σ‖P̂_i - alpha_p·P_i - beta_p‖²``.

    Solved in centered form: ``alpha_p = Σ⟨P_i - m, P̂_i - m̂⟩ / Σ‖P_i - m‖²`` and
    ``beta_p = m̂ - alpha_p·m`` over the jointly valid pixels.

    Raises:
        AlignmentError: fewer than 2 jointly valid pixels, or p constant over them
    """
    if p.shape != p_hat.shape:
        raise RasterValidationError(f"point map dims differ: {p.shape} vs {p_hat.shape}")
    m = p.mask & p_hat.mask
    n = int(np.count_nonzero(m))
    if n < 2:
        raise AlignmentError(f"need at least 2 jointly valid points, got {n}")

    pts = p.xyz[m]
    ref = p_hat.xyz[m]
    mean_p = np.array([ordered_sum(pts[:, k]) / n for k in range(3)])
    mean_ref = np.array([ordered_sum(ref[:, k]) / n for k in range(3)])
    dp = pts - mean_p
    dr = ref - mean_ref
    sxx = ordered_sum(dp[:, 0] * dp[:, 0] + dp[:, 1] * dp[:, 1] + dp[:, 2] * dp[:, 2])
    sxy = ordered_sum(dp[:, 0] * dr[:, 0] + dp[:, 1] * dr[:, 1] + dp[:, 2] * dr[:, 2])
    if sxx == 0.0:
        raise AlignmentError("point map is constant over the jointly valid pixels")

    alpha = sxy / sxx
    beta = mean_ref - alpha * mean_p
    logger.debug("Point affine fitted", points=n, alpha=alpha, beta=beta.tolist())
    return alpha, beta


def apply_point_affine(p: PointMap, alpha: float, beta: np.ndarray) -> PointMap:
    """``alpha·P + beta``; points that end up at or behind the camera become invalid."""
    xyz = alpha * p.xyz + np.asarray(beta, dtype=np.float64).reshape(1, 1, 3)
    with np.errstate(invalid="ignore"):
        mask = p.mask & (xyz[..., 2] > 0)
    return PointMap(xyz=xyz, mask=mask)
