"""Named sampling presets, pattern tokens and protocol dispatch."""

from typing import Any, Optional

from poissondepth.core.config import SampleSpec
from poissondepth.core.errors import SamplingError
from poissondepth.core.sampling.keypoint import sample_keypoints
from poissondepth.core.sampling.lidar import sample_lidar
from poissondepth.core.sampling.noise import add_noise
from poissondepth.core.sampling.random import sample_random
from poissondepth.core.types import CameraIntrinsics, DepthRaster, SparseDepth

SAMPLING_PRESETS: dict[str, dict[str, Any]] = {
    "random-1": {"pattern": "random", "density": 0.01},
    "random-3": {"pattern": "random", "density": 0.03},
    "random-5": {"pattern": "random", "density": 0.05},
    "random-10": {"pattern": "random", "density": 0.10},
    "keypoint-1500": {"pattern": "keypoint", "count": 1500},
    "keypoint-500": {"pattern": "keypoint", "count": 500},
    "keypoint-150": {"pattern": "keypoint", "count": 150},
    "lidar-64": {"pattern": "lidar", "lines": 64},
    "lidar-32": {"pattern": "lidar", "lines": 32},
    "lidar-16": {"pattern": "lidar", "lines": 16},
    "lidar-8": {"pattern": "lidar", "lines": 8},
}

_PATTERN_FIELDS = {
    "random": ("density", float),
    "keypoint": ("count", int),
    "lidar": ("lines", int),
}


def preset_spec(name: str, seed: int = 0, noise_sigma: float = 0.0) -> SampleSpec:
    if name not in SAMPLING_PRESETS:
        known = ", ".join(SAMPLING_PRESETS)
        raise ValueError(f"unknown preset {name!r}; expected one of: {known}")
    return SampleSpec(**SAMPLING_PRESETS[name], seed=seed, noise_sigma=noise_sigma)


def parse_pattern_token(token: str, seed: int = 0) -> SampleSpec:
    """Parse ``random:0.03``, ``lidar:16~0.01`` or a preset name such as ``keypoint-500``."""
    token = token.strip()
    body, _, sigma_text = token.partition("~")
    noise_sigma = float(sigma_text) if sigma_text else 0.0
    if body in SAMPLING_PRESETS:
        return preset_spec(body, seed=seed, noise_sigma=noise_sigma)

    pattern, sep, value = body.partition(":")
    if not sep or pattern not in _PATTERN_FIELDS:
        raise ValueError(
            f"bad pattern token {token!r}; expected PATTERN:VALUE[~SIGMA] or a preset name"
        )
    field, cast = _PATTERN_FIELDS[pattern]
    return SampleSpec(pattern=pattern, seed=seed, noise_sigma=noise_sigma, **{field: cast(value)})


def draw_samples(
    spec: SampleSpec,
    gt: DepthRaster,
    gray: Optional[DepthRaster] = None,
    intrinsics: Optional[CameraIntrinsics] = None,
) -> SparseDepth:
    """Run the sampler a spec names, then apply its noise."""
    if spec.pattern == "random":
        s = sample_random(gt, spec.density, spec.seed)
    elif spec.pattern == "keypoint":
        if gray is None:
            raise SamplingError("keypoint sampling needs a grayscale image")
        s = sample_keypoints(gray, gt, spec.count, spec.seed)
    else:
        if intrinsics is None:
            raise SamplingError("lidar sampling needs camera intrinsics")
        s = sample_lidar(gt, intrinsics, spec.lines, spec.seed)
    return add_noise(s, spec.noise_sigma, spec.seed)
