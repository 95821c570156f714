"""Target log-gradient field built from shifted relative depth."""

import numpy as np
import structlog

from poissondepth.core.errors import GradientFieldError
from poissondepth.core.types import DepthRaster, GradientField

logger = structlog.get_logger(__name__)

# Above this fraction of floored pixels the shift is considered inconsistent.
MAX_FLOORED_FRACTION = 0.05


def log_gradient(d: DepthRaster, shift: float, eps_pos: float = 1e-6) -> GradientField:
    """Forward differences of ``log(max(d + shift, eps_pos))``.

    Args:
        d: Dense relative depth
        shift: Shift in relative units (gamma of the global fit, or 0)
        eps_pos: Positivity floor for the log argument

    Returns:
        GradientField whose ``floored_count`` counts pixels that hit the floor

    Raises:
        GradientFieldError: d is not dense, shift is not finite, or more than 5% of
            pixels fall at or below the floor
    """
    if not d.is_dense:
        raise GradientFieldError(
            f"relative depth must be dense; {d.data.size - d.valid_count} pixels are invalid"
        )
    if not np.isfinite(shift):
        raise GradientFieldError(f"shift must be finite, got {shift}")
    if not eps_pos > 0:
        raise GradientFieldError(f"eps_pos must be positive, got {eps_pos}")

    shifted = d.data.astype(np.float64) + shift
    floored = ~(shifted > eps_pos)
    floored_count = int(np.count_nonzero(floored))
    if floored_count > MAX_FLOORED_FRACTION * shifted.size:
        raise GradientFieldError(
            f"{floored_count} of {shifted.size} pixels have d + shift <= {eps_pos}; "
            f"shift {shift:.6g} is inconsistent with the relative depth"
        )
    if floored_count:
        logger.warning("Log argument floored", pixels=floored_count, shift=shift)

    log_d = np.log(np.maximum(shifted, eps_pos))
    gx = np.zeros_like(log_d)
    gy = np.zeros_like(log_d)
    gx[:, :-1] = log_d[:, 1:] - log_d[:, :-1]
    gy[:-1, :] = log_d[1:, :] - log_d[:-1, :]
    return GradientField(gx=gx, gy=gy, floored_count=floored_count)
