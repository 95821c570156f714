"""Uniform random sampling of valid ground-truth pixels."""

import numpy as np

from poissondepth.core.errors import SamplingError
from poissondepth.core.types import DepthRaster, SparseDepth
from poissondepth.core.utils import make_rng


def random_count(density: float, num_valid: int) -> int:
    """``round(density · num_valid)`` with halves rounded up, at least 1."""
    return max(1, int(np.floor(density * num_valid + 0.5)))


def select_valid(gt: DepthRaster, flat_positions: np.ndarray) -> SparseDepth:
    """Entries at the given positions of gt's row-major valid-pixel list, sorted."""
    rows, cols = np.nonzero(gt.mask)
    chosen = np.sort(np.asarray(flat_positions, dtype=np.int64))
    r = rows[chosen]
    c = cols[chosen]
    return SparseDepth(rows=r, cols=c, depths=gt.data[r, c].astype(np.float64), shape=gt.shape)


def sample_random(gt: DepthRaster, density: float, seed: int = 0) -> SparseDepth:
    """Pick ``round(density · #valid)`` distinct valid pixels uniformly.

    Args:
        gt: Dense metric ground truth
        density: Fraction of valid pixels, in (0, 1]
        seed: Generator seed

    Returns:
        SparseDepth in row-major order carrying gt's values
    """
    if not 0 < density <= 1:
        raise SamplingError(f"density must be in (0, 1], got {density}")
    num_valid = gt.valid_count
    if num_valid == 0:
        raise SamplingError("ground truth has no valid pixels")
    count = random_count(density, num_valid)
    rng = make_rng(seed, "sample_random")
    return select_valid(gt, rng.choice(num_valid, size=count, replace=False))
