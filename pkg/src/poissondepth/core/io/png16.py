"""16-bit PNG depth in millimeters and 8/16-bit grayscale images."""

from pathlib import Path
from typing import Union

import numpy as np
import structlog
from PIL import Image

from poissondepth.core.errors import FormatError
from poissondepth.core.io.pfm import read_pfm
from poissondepth.core.types import DepthRaster

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]

MILLIMETERS_PER_METER = 1000.0
MAX_STORED = 65535
SIXTEEN_BIT_MODES = frozenset({"I;16", "I;16B", "I;16L", "I"})


def _load_16bit(path: Path) -> np.ndarray:
    try:
        with Image.open(path) as image:
            mode = image.mode
            if mode not in SIXTEEN_BIT_MODES:
                raise FormatError(path, f"expected a 16-bit single-channel PNG, got mode {mode}")
            values = np.array(image).astype(np.int64)
    except OSError as e:
        raise FormatError(path, f"unreadable image: {e}") from e
    if values.ndim != 2:
        raise FormatError(path, f"expected a single channel, got shape {values.shape}")
    if values.min() < 0 or values.max() > MAX_STORED:
        raise FormatError(path, "stored values exceed the 16-bit range")
    return values


def read_png16(path: PathLike) -> DepthRaster:
    """Depth in meters from millimeter PNG; stored 0 marks an invalid pixel."""
    stored = _load_16bit(Path(path))
    depth = (stored / MILLIMETERS_PER_METER).astype(np.float32)
    mask = stored > 0
    return DepthRaster(data=np.where(mask, depth, 0.0), mask=mask, unit="meters")


def write_png16(path: PathLike, r: DepthRaster) -> int:
    """Write ``round(depth · 1000)`` as uint16.

    Returns:
        Number of valid pixels deeper than 65.535 m, which are written as invalid
    """
    millimeters = np.rint(r.data.astype(np.float64) * MILLIMETERS_PER_METER)
    with np.errstate(invalid="ignore"):
        valid = r.mask & np.isfinite(millimeters) & (millimeters > 0)
        saturated = valid & (millimeters > MAX_STORED)
    count = int(np.count_nonzero(saturated))
    if count:
        logger.warning("PNG depth saturated", pixels=count, max_depth_m=MAX_STORED / 1000)
    stored = np.where(valid & ~saturated, millimeters, 0).astype(np.uint16)
    Image.fromarray(stored).save(path, format="PNG")
    return count


def read_gray(path: PathLike) -> DepthRaster:
    """Grayscale intensity from PFM or an 8/16-bit single-channel PNG."""
    path = Path(path)
    if path.suffix.lower() == ".pfm":
        return read_pfm(path, unit="intensity")
    try:
        with Image.open(path) as image:
            mode = image.mode
            if mode != "L" and mode not in SIXTEEN_BIT_MODES:
                raise FormatError(path, f"expected a grayscale image, got mode {mode}")
            values = np.array(image).astype(np.float32)
    except OSError as e:
        raise FormatError(path, f"unreadable image: {e}") from e
    return DepthRaster.dense(values, unit="intensity")
