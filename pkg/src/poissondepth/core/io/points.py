"""Point maps as a set of PFM files: PREFIX.x.pfm, PREFIX.y.pfm, PREFIX.z.pfm, PREFIX.mask.pfm."""

from pathlib import Path
from typing import Union

import numpy as np
import structlog

from poissondepth.core.errors import FormatError
from poissondepth.core.io.pfm import read_pfm_array, write_pfm_array
from poissondepth.core.types import PointMap

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]

CHANNELS = ("x", "y", "z")


def point_map_paths(prefix: PathLike) -> dict[str, Path]:
    prefix = str(prefix)
    return {name: Path(f"{prefix}.{name}.pfm") for name in (*CHANNELS, "mask")}


def write_point_map(prefix: PathLike, p: PointMap) -> None:
    """Coordinates are stored as float32; the mask file holds 1.0 (valid) or 0.0."""
    paths = point_map_paths(prefix)
    for k, name in enumerate(CHANNELS):
        write_pfm_array(paths[name], p.xyz[..., k])
    write_pfm_array(paths["mask"], p.mask.astype(np.float32))


def read_point_map(prefix: PathLike) -> PointMap:
    """Load a point map; non-finite points and points at or behind the camera are invalid."""
    paths = point_map_paths(prefix)
    channels = [read_pfm_array(paths[name]) for name in CHANNELS]
    mask = read_pfm_array(paths["mask"])
    for name, array in zip((*CHANNELS, "mask"), (*channels, mask)):
        if array.shape != mask.shape:
            raise FormatError(paths[name], f"dims {array.shape} differ from mask {mask.shape}")
    xyz = np.stack(channels, axis=-1).astype(np.float64)
    valid = (mask > 0.5) & np.isfinite(xyz).all(axis=-1)
    behind = valid & ~(xyz[..., 2] > 0)
    if behind.any():
        logger.warning(
            "Points at or behind the camera marked invalid",
            path=str(paths["z"]),
            pixels=int(behind.sum()),
        )
    return PointMap(xyz=xyz, mask=valid & ~behind)
