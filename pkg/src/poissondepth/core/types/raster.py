"""Dense depth rasters with explicit validity masks."""

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
from numpy.typing import ArrayLike

from poissondepth.core.errors import RasterValidationError
from poissondepth.core.types.sparse import SparseDepth

Unit = Literal["meters", "relative", "intensity"]

# Units whose valid values must be strictly positive.
DEPTH_UNITS: frozenset[str] = frozenset({"meters", "relative"})


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class DepthRaster:
    """H×W grid of float32 values plus a boolean validity mask.

    The same type carries metric depth, relative depth from a monocular model, and
    grayscale intensity; ``unit`` tells them apart. Arrays are copied on construction
    and made read-only.
    """

    data: np.ndarray
    mask: np.ndarray
    unit: Unit = "meters"

    def __post_init__(self):
        object.__setattr__(self, "data", _frozen(np.array(self.data, dtype=np.float32)))
        object.__setattr__(self, "mask", _frozen(np.array(self.mask, dtype=bool)))

    @classmethod
    def dense(cls, values: ArrayLike, unit: Unit = "meters") -> "DepthRaster":
        """Raster with every pixel valid."""
        data = np.asarray(values, dtype=np.float32)
        return cls(data=data, mask=np.ones(data.shape, dtype=bool), unit=unit)

    @classmethod
    def from_array(
        cls,
        values: ArrayLike,
        unit: Unit = "meters",
        mask: Optional[ArrayLike] = None,
    ) -> "DepthRaster":
        """Raster whose mask is derived from the values when not given.

        Non-finite pixels are invalid; for depth units non-positive pixels are too.
        """
        data = np.asarray(values, dtype=np.float32)
        if mask is None:
            derived = np.isfinite(data)
            if unit in DEPTH_UNITS:
                derived &= data > 0
            mask = derived
        return cls(data=data, mask=mask, unit=unit)

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    @property
    def valid_count(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def is_dense(self) -> bool:
        return bool(self.mask.all())

    def valid_values(self) -> np.ndarray:
        """Valid values in row-major order as float64."""
        return self.data[self.mask].astype(np.float64)

    def with_unit(self, unit: Unit) -> "DepthRaster":
        return DepthRaster(data=self.data, mask=self.mask, unit=unit)


def validate_raster(r: DepthRaster) -> None:
    """Raise RasterValidationError unless every DepthRaster invariant holds.

    Values under an invalid mask are never inspected. The error names the first
    offending pixel in row-major order.
    """
    if r.data.ndim != 2 or r.mask.shape != r.data.shape:
        raise RasterValidationError(
            f"dimension mismatch: data {r.data.shape} vs mask {r.mask.shape}"
        )
    if r.data.shape[0] < 1 or r.data.shape[1] < 1:
        raise RasterValidationError(f"empty raster {r.data.shape}")

    finite = np.isfinite(r.data)
    offending = r.mask & ~finite
    if r.unit in DEPTH_UNITS:
        # Comparisons on NaN are False, so non-finite pixels stay out of this term.
        offending |= r.mask & finite & (r.data <= 0)
    if not offending.any():
        return

    row, col = (int(v) for v in np.argwhere(offending)[0])
    value = r.data[row, col]
    kind = "non-finite" if not np.isfinite(value) else "non-positive"
    raise RasterValidationError(f"{kind} value at ({row},{col})", pixel=(row, col))


def require_min_size(r: DepthRaster, min_height: int = 2, min_width: int = 2) -> None:
    """Forward differences need at least one neighbor along each axis."""
    if r.height < min_height or r.width < min_width:
        raise RasterValidationError(
            f"raster {r.height}x{r.width} is smaller than {min_height}x{min_width}"
        )


def sparse_to_raster(s: SparseDepth) -> DepthRaster:
    """Scatter sparse observations into a raster that is valid only at entry pixels."""
    s.validate()
    height, width = s.shape
    data = np.zeros((height, width), dtype=np.float32)
    mask = np.zeros((height, width), dtype=bool)
    data[s.rows, s.cols] = s.depths
    mask[s.rows, s.cols] = True
    return DepthRaster(data=data, mask=mask, unit="meters")


def raster_to_sparse(r: DepthRaster) -> SparseDepth:
    """Collect the valid pixels of a raster as sparse observations (row-major)."""
    rows, cols = np.nonzero(r.mask)
    return SparseDepth(
        rows=rows,
        cols=cols,
        depths=r.data[rows, cols].astype(np.float64),
        shape=r.shape,
    )
