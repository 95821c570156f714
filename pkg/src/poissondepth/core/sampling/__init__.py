"""Sparse depth synthesis: random, keypoint and LiDAR protocols with seeded noise."""

from poissondepth.core.sampling.keypoint import harris_response, local_maxima, sample_keypoints
from poissondepth.core.sampling.lidar import elevation_angles, sample_lidar
from poissondepth.core.sampling.noise import add_noise
from poissondepth.core.sampling.presets import (
    SAMPLING_PRESETS,
    draw_samples,
    parse_pattern_token,
    preset_spec,
)
from poissondepth.core.sampling.random import random_count, sample_random

__all__ = [
    "SAMPLING_PRESETS",
    "add_noise",
    "draw_samples",
    "elevation_angles",
    "harris_response",
    "local_maxima",
    "parse_pattern_token",
    "preset_spec",
    "random_count",
    "sample_keypoints",
    "sample_lidar",
    "sample_random",
]
