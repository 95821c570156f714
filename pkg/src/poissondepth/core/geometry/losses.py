"""Forward reference values of the point-map training losses.

All terms are evaluated over the joint mask M (pixels valid in both point maps) and
weighted by ``1 / ẑ`` of the ground-truth point. Means are the default; ``raw_sum=True``
returns the unnormalized sums.
"""

import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from poissondepth.core.config import LossWeights
from poissondepth.core.errors import MetricsError, RasterValidationError
from poissondepth.core.geometry.normals import estimate_normals
from poissondepth.core.types import PointMap
from poissondepth.core.utils import make_rng, ordered_sum


class LossBreakdown(BaseModel):
    """Individual loss terms and their weighted total."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    global_term: float = Field(..., alias="global")
    local_term: float = Field(..., alias="local")
    normal_term: float = Field(..., alias="normal")
    total: float


def joint_mask(p: PointMap, p_hat: PointMap) -> np.ndarray:
    """Pixels valid in both maps; ground-truth depth must be positive on all of them."""
    if p.shape != p_hat.shape:
        raise RasterValidationError(f"point map dims differ: {p.shape} vs {p_hat.shape}")
    m = p.mask & p_hat.mask
    if not m.any():
        raise MetricsError("point maps have no jointly valid pixels")
    bad = m & ~(p_hat.xyz[..., 2] > 0)
    if bad.any():
        row, col = (int(v) for v in np.argwhere(bad)[0])
        raise RasterValidationError(
            f"ground-truth point has non-positive depth at ({row},{col})", pixel=(row, col)
        )
    return m


def _weighted_l1(p: PointMap, p_hat: PointMap, m: np.ndarray) -> np.ndarray:
    """``‖P_i - P̂_i‖₁ / ẑ_i`` for every pixel of m, row-major."""
    diff = p.xyz[m] - p_hat.xyz[m]
    l1 = np.abs(diff[:, 0]) + np.abs(diff[:, 1]) + np.abs(diff[:, 2])
    return l1 / p_hat.xyz[m][:, 2]


def _reduce(values: np.ndarray, raw_sum: bool) -> float:
    total = ordered_sum(values)
    return total if raw_sum else total / values.size


def sample_loss_anchors(num_valid: int, count: int, seed: int) -> np.ndarray:
    """Positions (into the row-major list of M) of the sphere anchors.

    Drawn uniformly without replacement; at most ``num_valid`` anchors.
    """
    rng = make_rng(seed, "loss_anchors")
    return rng.choice(num_valid, size=min(count, num_valid), replace=False)


def loss_global(p: PointMap, p_hat: PointMap, raw_sum: bool = False) -> float:
    m = joint_mask(p, p_hat)
    return _reduce(_weighted_l1(p, p_hat, m), raw_sum)


def loss_local(
    p: PointMap,
    p_hat: PointMap,
    w: Optional[LossWeights] = None,
    seed: int = 0,
    raw_sum: bool = False,
) -> float:
    """Weighted L1 over spherical neighborhoods of randomly drawn anchors.

    For each anchor j the sphere holds every i in M with ``‖P̂_i - P̂_j‖ < r``, where
    ``r = radius_ratio · median ‖P̂‖``. The result is the mean over all (j, i) pairs.
    """
    w = w or LossWeights()
    m = joint_mask(p, p_hat)
    per_pixel = _weighted_l1(p, p_hat, m)
    q = p_hat.xyz[m]
    qx, qy, qz = q[:, 0], q[:, 1], q[:, 2]
    radius = w.radius_ratio * float(np.median(np.sqrt(qx * qx + qy * qy + qz * qz)))

    members = []
    for j in sample_loss_anchors(q.shape[0], w.anchor_count, seed):
        dx = qx - qx[j]
        dy = qy - qy[j]
        dz = qz - qz[j]
        inside = np.sqrt(dx * dx + dy * dy + dz * dz) < radius
        members.append(per_pixel[inside])
    return _reduce(np.concatenate(members), raw_sum)


def loss_normal(p: PointMap, p_hat: PointMap, raw_sum: bool = False) -> float:
    """Mean angle in radians between estimated normals where both are valid."""
    joint_mask(p, p_hat)
    n = estimate_normals(p)
    n_hat = estimate_normals(p_hat)
    both = n.mask & n_hat.mask
    if not both.any():
        raise MetricsError("no pixel has a valid normal in both point maps")
    a = n.n[both]
    b = n_hat.n[both]
    cosine = a[:, 0] * b[:, 0] + a[:, 1] * b[:, 1] + a[:, 2] * b[:, 2]
    sine = np.linalg.norm(np.cross(a, b), axis=1)
    # Identical normals give an angle of exactly 0.
    return _reduce(np.arctan2(sine, cosine), raw_sum)


def total_loss(
    p: PointMap,
    p_hat: PointMap,
    w: Optional[LossWeights] = None,
    seed: int = 0,
    raw_sum: bool = False,
) -> float:
    return compute_losses(p, p_hat, w, seed, raw_sum).total


def compute_losses(
    p: PointMap,
    p_hat: PointMap,
    w: Optional[LossWeights] = None,
    seed: int = 0,
    raw_sum: bool = False,
) -> LossBreakdown:
    """All three terms and ``global + λ_local·local + λ_normal·normal``."""
    w = w or LossWeights()
    g = loss_global(p, p_hat, raw_sum)
    local = loss_local(p, p_hat, w, seed, raw_sum)
    normal = loss_normal(p, p_hat, raw_sum)
    total = g + w.lambda_local * local + w.lambda_normal * normal
    if not math.isfinite(total):
        raise MetricsError(f"loss is not finite: global={g} local={local} normal={normal}")
    return LossBreakdown(global_term=g, local_term=local, normal_term=normal, total=total)
