"""Multiplicative Gaussian noise on sparse depths."""

import numpy as np
import structlog

from poissondepth.core.errors import SamplingError
from poissondepth.core.types import SparseDepth
from poissondepth.core.utils import make_rng

logger = structlog.get_logger(__name__)

MIN_NOISY_DEPTH = 1e-4


def add_noise(s: SparseDepth, sigma: float = 0.01, seed: int = 0) -> SparseDepth:
    """Multiply each depth by ``1 + sigma·z`` with z standard normal, clamped at 1e-4 m."""
    if not sigma >= 0 or not np.isfinite(sigma):
        raise SamplingError(f"noise sigma must be finite and >= 0, got {sigma}")
    if sigma == 0:
        return s
    rng = make_rng(seed, "add_noise")
    z = rng.standard_normal(len(s))
    noisy = np.maximum(s.depths * (1.0 + sigma * z), MIN_NOISY_DEPTH)
    clamped = int(np.count_nonzero(noisy == MIN_NOISY_DEPTH))
    if clamped:
        logger.warning("Noisy depths clamped", entries=clamped, sigma=sigma)
    return s.with_depths(noisy)
