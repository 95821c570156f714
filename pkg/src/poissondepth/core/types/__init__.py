"""Domain types and validity-mask semantics."""

from poissondepth.core.types.fields import GradientField
from poissondepth.core.types.params import AffineParams
from poissondepth.core.types.points import CameraIntrinsics, NormalMap, PointMap
from poissondepth.core.types.raster import (
    DepthRaster,
    Unit,
    raster_to_sparse,
    require_min_size,
    sparse_to_raster,
    validate_raster,
)
from poissondepth.core.types.sparse import SparseDepth

__all__ = [
    "AffineParams",
    "CameraIntrinsics",
    "DepthRaster",
    "GradientField",
    "NormalMap",
    "PointMap",
    "SparseDepth",
    "Unit",
    "raster_to_sparse",
    "require_min_size",
    "sparse_to_raster",
    "validate_raster",
]
