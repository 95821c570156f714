"""Point maps, normal maps and pinhole intrinsics."""

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PointMap:
    """H×W×3 camera-frame coordinates in meters (+z forward) with a validity mask."""

    xyz: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        xyz = np.array(self.xyz, dtype=np.float64)
        if xyz.ndim != 3 or xyz.shape[2] != 3:
            raise ValueError(f"point map must be HxWx3, got {xyz.shape}")
        mask = np.array(self.mask, dtype=bool)
        if mask.shape != xyz.shape[:2]:
            raise ValueError(f"mask {mask.shape} does not match points {xyz.shape[:2]}")
        object.__setattr__(self, "xyz", _frozen(xyz))
        object.__setattr__(self, "mask", _frozen(mask))

    @property
    def height(self) -> int:
        return int(self.xyz.shape[0])

    @property
    def width(self) -> int:
        return int(self.xyz.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    def scaled(self, factor: float) -> "PointMap":
        return PointMap(xyz=self.xyz * factor, mask=self.mask)


@dataclass(frozen=True, eq=False)
class NormalMap:
    """H×W×3 unit normals with a validity mask; invalid normals are stored as zeros."""

    n: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "n", _frozen(np.array(self.n, dtype=np.float64)))
        object.__setattr__(self, "mask", _frozen(np.array(self.mask, dtype=bool)))

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self.n.shape[0]), int(self.n.shape[1]))


class CameraIntrinsics(BaseModel):
    """Pinhole intrinsics in pixels."""

    model_config = ConfigDict(frozen=True)

    fx: float = Field(..., gt=0, allow_inf_nan=False, description="Focal length x (pixels)")
    fy: float = Field(..., gt=0, allow_inf_nan=False, description="Focal length y (pixels)")
    cx: float = Field(..., allow_inf_nan=False, description="Principal point x (pixels)")
    cy: float = Field(..., allow_inf_nan=False, description="Principal point y (pixels)")

    @classmethod
    def parse(cls, text: str) -> "CameraIntrinsics":
        """Parse ``"FX,FY,CX,CY"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected FX,FY,CX,CY, got {text!r}")
        fx, fy, cx, cy = (float(p) for p in parts)
        return cls(fx=fx, fy=fy, cx=cx, cy=cy)

    @field_validator("fx", "fy", "cx", "cy", mode="before")
    @classmethod
    def _coerce(cls, v):
        return float(v)

    def as_string(self) -> str:
        return f"{self.fx!r},{self.fy!r},{self.cx!r},{self.cy!r}"
