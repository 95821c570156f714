"""Fixed-order floating-point reductions.

All reductions over rasters accumulate in float64, strictly left to right over the
row-major flattening. ``np.sum`` uses pairwise/SIMD summation whose grouping depends on
array length, so results would differ from a plain scalar loop; ``np.cumsum`` is a
sequential scan and matches ``acc += v`` bit for bit.
"""

import numpy as np
from numpy.typing import ArrayLike


def ordered_sum(values: ArrayLike) -> float:
    """Sum values sequentially in row-major order using float64."""
    flat = np.ravel(np.asarray(values, dtype=np.float64))
    if flat.size == 0:
        return 0.0
    return float(np.cumsum(flat)[-1])


def ordered_dot(a: np.ndarray, b: np.ndarray) -> float:
    """Dot product with sequential accumulation."""
    return ordered_sum(np.multiply(a, b, dtype=np.float64))
