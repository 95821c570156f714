"""Shared fixtures: synthetic depth scenes, anchors, intrinsics and a CLI runner."""

import numpy as np
import pytest
import structlog
from typer.testing import CliRunner

from poissondepth.core.types import CameraIntrinsics, DepthRaster, SparseDepth


@pytest.fixture(autouse=True)
def reset_logging():
    """Drop logging configuration left behind by CLI invocations."""
    yield
    structlog.reset_defaults()


@pytest.fixture
def make_depth():
    """Factory for smooth positive depth fields in [low, high] meters (float32 values)."""

    def factory(height: int, width: int, seed: int = 0, low: float = 2.0, high: float = 6.0):
        rng = np.random.default_rng(seed)
        rows, cols = np.mgrid[0:height, 0:width].astype(np.float64)
        fr, fc = rng.uniform(0.4, 1.0, size=2)
        pr, pc = rng.uniform(0.0, 2.0 * np.pi, size=2)
        field = 0.6 * np.sin(np.pi * fr * rows / height + pr) + 0.4 * np.cos(
            np.pi * fc * cols / width + pc
        )
        depth = low + (high - low) * (field + 1.0) / 2.0
        return depth.astype(np.float32).astype(np.float64)

    return factory


@pytest.fixture
def make_anchors():
    """Factory drawing ``count`` distinct pixels of a depth array as SparseDepth."""

    def factory(depth: np.ndarray, count: int, seed: int = 0) -> SparseDepth:
        height, width = depth.shape
        rng = np.random.default_rng(seed)
        flat = rng.choice(height * width, size=count, replace=False)
        rows, cols = np.divmod(flat, width)
        return SparseDepth(
            rows=rows, cols=cols, depths=depth[rows, cols], shape=(height, width)
        ).sorted()

    return factory


@pytest.fixture
def gt_raster(make_depth):
    """Dense 16×16 metric ground truth."""
    return DepthRaster.dense(make_depth(16, 16, seed=7))


@pytest.fixture
def intrinsics():
    """Pinhole intrinsics centered on a 16×16 raster."""
    return CameraIntrinsics(fx=20.0, fy=20.0, cx=7.5, cy=7.5)


@pytest.fixture
def runner():
    """CLI runner keeping standard output free of standard error."""
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:
        return CliRunner()
