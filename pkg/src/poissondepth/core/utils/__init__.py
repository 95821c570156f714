"""Core utilities for timing, hashing, reductions and logging."""

from poissondepth.core.utils.hashing import stream_id
from poissondepth.core.utils.log import configure_logging
from poissondepth.core.utils.reduction import ordered_dot, ordered_sum
from poissondepth.core.utils.rng import make_rng
from poissondepth.core.utils.timing import TimingContext

__all__ = [
    "stream_id",
    "configure_logging",
    "make_rng",
    "ordered_dot",
    "ordered_sum",
    "TimingContext",
]
