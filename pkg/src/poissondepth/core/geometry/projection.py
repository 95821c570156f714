"""Pinhole back-projection, z-channel extraction and ray-wise lifting."""

import numpy as np

from poissondepth.core.errors import RasterValidationError
from poissondepth.core.types import CameraIntrinsics, DepthRaster, PointMap


def pixel_rays(shape: tuple[int, int], k: CameraIntrinsics) -> tuple[np.ndarray, np.ndarray]:
    """Normalized ray slopes ``((c - cx)/fx, (r - cy)/fy)`` per pixel, float64."""
    height, width = shape
    rows, cols = np.mgrid[0:height, 0:width].astype(np.float64)
    return (cols - k.cx) / k.fx, (rows - k.cy) / k.fy


def backproject(d: DepthRaster, k: CameraIntrinsics) -> PointMap:
    """``P(r, c) = D(r, c) · ((c - cx)/fx, (r - cy)/fy, 1)``; mask copied.

    Invalid pixels are projected from their stored values so that ``extract_z`` gives
    back the raster bit for bit.
    """
    ray_x, ray_y = pixel_rays(d.shape, k)
    z = d.data.astype(np.float64)
    with np.errstate(invalid="ignore", over="ignore"):
        xyz = np.stack([z * ray_x, z * ray_y, z], axis=-1)
    return PointMap(xyz=xyz, mask=d.mask)


def extract_z(p: PointMap) -> DepthRaster:
    return DepthRaster(data=p.xyz[..., 2], mask=p.mask, unit="meters")


def lift_point_map(relative: PointMap, depth: DepthRaster) -> PointMap:
    """Rescale each relative point along its ray so its z equals the metric depth.

    Pixels where either input is invalid, or the relative z is not positive, are invalid
    and stored as zeros.
    """
    if relative.shape != depth.shape:
        raise RasterValidationError(
            f"point map dims {relative.shape} differ from depth dims {depth.shape}"
        )
    z_rel = relative.xyz[..., 2]
    with np.errstate(invalid="ignore"):
        mask = relative.mask & depth.mask & np.isfinite(z_rel) & (z_rel > 0)
    ratio = np.zeros(depth.shape, dtype=np.float64)
    ratio[mask] = depth.data[mask].astype(np.float64) / z_rel[mask]
    xyz = np.where(mask[..., None], relative.xyz * ratio[..., None], 0.0)
    return PointMap(xyz=xyz, mask=mask)
