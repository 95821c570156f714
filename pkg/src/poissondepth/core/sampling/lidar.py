"""Synthetic LiDAR scan lines by elevation-angle binning."""

import numpy as np
import structlog

from poissondepth.core.errors import SamplingError
from poissondepth.core.geometry.projection import backproject
from poissondepth.core.types import CameraIntrinsics, DepthRaster, SparseDepth
from poissondepth.core.utils import make_rng

logger = structlog.get_logger(__name__)

# Half-width of a beam as a fraction of the bin width.
BEAM_HALF_WIDTH = 1.0 / 8.0


def elevation_angles(gt: DepthRaster, k: CameraIntrinsics) -> np.ndarray:
    """``atan2(y, sqrt(x² + z²))`` of every back-projected pixel, NaN where invalid."""
    xyz = backproject(gt, k).xyz
    x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
    with np.errstate(invalid="ignore"):
        angles = np.arctan2(y, np.sqrt(x * x + z * z))
    return np.where(gt.mask, angles, np.nan)


def nearest_in_column(
    beam: np.ndarray, cols: np.ndarray, dist: np.ndarray, width: int
) -> np.ndarray:
    """Mask of the pixel closest to its beam center within each (beam, column) group."""
    key = beam * width + cols
    order = np.lexsort((dist, key))
    sorted_key = key[order]
    first = np.ones(order.size, dtype=bool)
    first[1:] = sorted_key[1:] != sorted_key[:-1]
    nearest = np.zeros(order.size, dtype=bool)
    nearest[order[first]] = True
    return nearest


def sample_lidar(gt: DepthRaster, k: CameraIntrinsics, lines: int, seed: int = 0) -> SparseDepth:
    """Keep pixels within ±bin/8 of one of ``lines`` equally spaced elevation centers.

    A column the window misses for a beam still contributes the pixel of that beam's
    bin nearest the center, so a beam narrower than a pixel row traces a full scanline.
    Each beam keeps at most ``width`` pixels, subsampled with the seeded generator.
    """
    if lines < 1:
        raise SamplingError(f"lines must be >= 1, got {lines}")
    if gt.valid_count == 0:
        raise SamplingError("ground truth has no valid pixels")

    rows, cols = np.nonzero(gt.mask)
    angles = elevation_angles(gt, k)[rows, cols]
    low = float(angles.min())
    span = float(angles.max()) - low

    if span == 0.0:
        beam = np.zeros(rows.size, dtype=np.int64)
        keep = np.ones(rows.size, dtype=bool)
    else:
        bin_width = span / lines
        beam = np.clip(np.floor((angles - low) / bin_width), 0, lines - 1).astype(np.int64)
        centers = low + (beam + 0.5) * bin_width
        dist = np.abs(angles - centers)
        keep = dist <= BEAM_HALF_WIDTH * bin_width
        covered = np.zeros(lines * gt.width, dtype=bool)
        covered[beam[keep] * gt.width + cols[keep]] = True
        fill = nearest_in_column(beam, cols, dist, gt.width) & ~covered[beam * gt.width + cols]
        if fill.any():
            logger.debug("Beam gaps filled", lines=lines, pixels=int(fill.sum()))
        keep |= fill

    rng = make_rng(seed, "sample_lidar")
    cap = gt.width
    selected = []
    capped = 0
    for b in range(lines):
        members = np.flatnonzero(keep & (beam == b))
        if members.size > cap:
            members = np.sort(rng.choice(members, size=cap, replace=False))
            capped += 1
        selected.append(members)
    chosen = np.concatenate(selected)

    logger.debug("LiDAR lines sampled", lines=lines, points=int(chosen.size), capped_beams=capped)
    r = rows[chosen]
    c = cols[chosen]
    return SparseDepth(
        rows=r, cols=c, depths=gt.data[r, c].astype(np.float64), shape=gt.shape
    ).sorted()
