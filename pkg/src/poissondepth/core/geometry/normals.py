"""Surface normals from point maps by central differences."""

import numpy as np

from poissondepth.core.types import NormalMap, PointMap

# Cross products shorter than this are treated as a degenerate (colinear) stencil.
MIN_CROSS_NORM = 1e-12


def estimate_normals(p: PointMap) -> NormalMap:
    """Camera-facing unit normals ``cross(P(r,c+1) - P(r,c-1), P(r+1,c) - P(r-1,c))``.

    A normal is valid only at interior pixels whose center and four stencil neighbors are
    valid and whose cross product is not degenerate. Invalid normals are zero.
    """
    height, width = p.shape
    normals = np.zeros((height, width, 3), dtype=np.float64)
    mask = np.zeros((height, width), dtype=bool)
    if height < 3 or width < 3:
        return NormalMap(n=normals, mask=mask)

    xyz = p.xyz
    m = p.mask
    along_cols = xyz[1:-1, 2:] - xyz[1:-1, :-2]
    along_rows = xyz[2:, 1:-1] - xyz[:-2, 1:-1]
    with np.errstate(invalid="ignore", over="ignore"):
        cross = np.cross(along_cols, along_rows)
        cx, cy, cz = cross[..., 0], cross[..., 1], cross[..., 2]
        norm = np.sqrt(cx * cx + cy * cy + cz * cz)
        stencil = m[1:-1, 1:-1] & m[1:-1, 2:] & m[1:-1, :-2] & m[2:, 1:-1] & m[:-2, 1:-1]
        ok = stencil & np.isfinite(norm) & (norm >= MIN_CROSS_NORM)

    unit = np.zeros_like(cross)
    unit[ok] = cross[ok] / norm[ok][:, None]
    unit[unit[..., 2] > 0] *= -1.0

    normals[1:-1, 1:-1] = unit
    mask[1:-1, 1:-1] = ok
    return NormalMap(n=normals, mask=mask)
