"""Portable Float Map (grayscale ``Pf``) reader and writer.

Header: ``Pf``, ``width height``, scale (negative means little-endian). Rows are stored
bottom to top as float32.
"""

from pathlib import Path
from typing import Union

import numpy as np

from poissondepth.core.errors import FormatError
from poissondepth.core.types import DepthRaster, Unit

PathLike = Union[str, Path]


def _header_line(handle, path: Path, what: str) -> str:
    raw = handle.readline()
    if not raw:
        raise FormatError(path, f"missing {what} in header")
    try:
        return raw.decode("ascii").strip()
    except UnicodeDecodeError as e:
        raise FormatError(path, f"non-ASCII {what} in header") from e


def read_pfm_array(path: PathLike) -> np.ndarray:
    """Raw float32 contents of a grayscale PFM, top row first."""
    path = Path(path)
    with open(path, "rb") as handle:
        magic = _header_line(handle, path, "magic")
        if magic == "PF":
            raise FormatError(path, "color PFM unsupported")
        if magic != "Pf":
            raise FormatError(path, f"bad magic {magic!r}, expected 'Pf'")

        dims = _header_line(handle, path, "dimensions").split()
        try:
            width, height = (int(v) for v in dims)
        except ValueError as e:
            raise FormatError(path, f"bad dimensions line {' '.join(dims)!r}") from e
        if width < 1 or height < 1:
            raise FormatError(path, f"bad dimensions {width}x{height}")

        scale_text = _header_line(handle, path, "scale")
        try:
            scale = float(scale_text)
        except ValueError as e:
            raise FormatError(path, f"bad scale {scale_text!r}") from e
        if scale == 0.0 or not np.isfinite(scale):
            raise FormatError(path, f"bad scale {scale_text!r}")

        payload = handle.read()

    expected = width * height * 4
    if len(payload) < expected:
        raise FormatError(path, f"truncated payload: {len(payload)} of {expected} bytes")
    if len(payload) > expected:
        raise FormatError(path, f"{len(payload) - expected} trailing bytes after payload")

    dtype = np.dtype("<f4") if scale < 0 else np.dtype(">f4")
    grid = np.frombuffer(payload, dtype=dtype).reshape(height, width)
    return np.flipud(grid).astype(np.float32)


def write_pfm_array(path: PathLike, values: np.ndarray) -> None:
    """Write a 2D array as little-endian grayscale PFM (scale -1.0)."""
    grid = np.asarray(values, dtype="<f4")
    if grid.ndim != 2:
        raise ValueError(f"PFM holds a 2D array, got shape {grid.shape}")
    height, width = grid.shape
    with open(path, "wb") as handle:
        handle.write(f"Pf\n{width} {height}\n-1.0\n".encode("ascii"))
        handle.write(np.ascontiguousarray(np.flipud(grid)).tobytes())


def read_pfm(path: PathLike, unit: Unit = "meters") -> DepthRaster:
    """Raster from a PFM; non-finite pixels are invalid, and for depth units so is <= 0."""
    return DepthRaster.from_array(read_pfm_array(path), unit=unit)


def write_pfm(path: PathLike, r: DepthRaster) -> None:
    """Write a raster; invalid pixels are stored as NaN."""
    write_pfm_array(path, np.where(r.mask, r.data, np.float32(np.nan)))
