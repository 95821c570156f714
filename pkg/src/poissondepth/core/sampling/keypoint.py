"""Depth at Harris-style corner keypoints of a grayscale image."""

import numpy as np
import structlog
from scipy import ndimage

from poissondepth.core.errors import SamplingError
from poissondepth.core.sampling.random import select_valid
from poissondepth.core.types import DepthRaster, SparseDepth
from poissondepth.core.utils import make_rng

logger = structlog.get_logger(__name__)

HARRIS_K = 0.05

_BINOMIAL = np.array([1.0, 2.0, 1.0]) / 4.0
# 3×3 Gaussian window (binomial approximation), weights sum to 1.
GAUSSIAN_WINDOW = np.outer(_BINOMIAL, _BINOMIAL)


def harris_response(gray: DepthRaster) -> np.ndarray:
    """Corner response ``det(M) - k·trace(M)²`` of the windowed structure tensor.

    Gradients are central differences (one-sided at borders); invalid intensity pixels
    read as 0 and the window treats pixels outside the image as 0.
    """
    image = np.where(gray.mask, gray.data.astype(np.float64), 0.0)
    iy, ix = np.gradient(image)
    sxx = ndimage.convolve(ix * ix, GAUSSIAN_WINDOW, mode="constant", cval=0.0)
    syy = ndimage.convolve(iy * iy, GAUSSIAN_WINDOW, mode="constant", cval=0.0)
    sxy = ndimage.convolve(ix * iy, GAUSSIAN_WINDOW, mode="constant", cval=0.0)
    trace = sxx + syy
    return sxx * syy - sxy * sxy - HARRIS_K * (trace * trace)


def local_maxima(response: np.ndarray) -> np.ndarray:
    """3×3 non-maximum suppression; plateau pixels all survive."""
    peak = ndimage.maximum_filter(response, size=3, mode="constant", cval=-np.inf)
    return response >= peak


def sample_keypoints(
    gray: DepthRaster, gt: DepthRaster, count: int, seed: int = 0
) -> SparseDepth:
    """Ground-truth depths at the ``count`` strongest corners.

    Candidates are local maxima with a positive response at gt-valid pixels, ordered by
    descending score with seeded random tie-breaking, then row and column. Degraded
    results carry a message in ``SparseDepth.warnings``.

    Raises:
        SamplingError: dims differ, count < 1, or gt has no valid pixels
    """
    if gray.shape != gt.shape:
        raise SamplingError(f"grayscale dims {gray.shape} differ from ground truth {gt.shape}")
    if count < 1:
        raise SamplingError(f"keypoint count must be >= 1, got {count}")
    num_valid = gt.valid_count
    if num_valid == 0:
        raise SamplingError("ground truth has no valid pixels")
    rng = make_rng(seed, "sample_keypoints")

    if count >= num_valid:
        message = f"count {count} >= {num_valid} valid pixels; returning all valid pixels"
        logger.warning("Keypoint count exceeds valid pixels", count=count, valid=num_valid)
        return _with_warning(select_valid(gt, np.arange(num_valid)), message)

    response = harris_response(gray)
    candidates = local_maxima(response) & (response > 0) & gt.mask
    rows, cols = np.nonzero(candidates)
    if rows.size == 0:
        message = "no corner responses; fell back to seeded random selection"
        logger.warning("No corners found, using random pixels", count=count)
        picked = rng.choice(num_valid, size=count, replace=False)
        return _with_warning(select_valid(gt, picked), message)

    scores = response[rows, cols]
    tie_break = rng.random(rows.size)
    order = np.lexsort((cols, rows, tie_break, -scores))[:count]
    r = rows[order]
    c = cols[order]
    selected = SparseDepth(
        rows=r, cols=c, depths=gt.data[r, c].astype(np.float64), shape=gt.shape
    ).sorted()

    if rows.size < count:
        message = f"only {rows.size} keypoint candidates for count {count}"
        logger.warning("Fewer corners than requested", count=count, candidates=int(rows.size))
        return _with_warning(selected, message)
    return selected


def _with_warning(s: SparseDepth, message: str) -> SparseDepth:
    return SparseDepth(
        rows=s.rows, cols=s.cols, depths=s.depths, shape=s.shape, warnings=s.warnings + (message,)
    )
