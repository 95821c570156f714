"""Validated parameter models for solver, LWLR, losses and sampling."""

import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

SamplePattern = Literal["random", "keypoint", "lidar"]

MAX_CG_ITER_CAP = 20000


class SolverConfig(BaseModel):
    """Screened Poisson solve parameters."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(
        default=1.0,
        ge=0,
        allow_inf_nan=False,
        alias="lambda",
        description="Data-term weight (dimensionless)",
    )
    cg_tol: float = Field(
        default=1e-8, gt=0, lt=1, description="Relative residual threshold ‖b−Au‖/‖b‖"
    )
    cg_max_iter: Optional[int] = Field(
        default=None,
        gt=0,
        description="Iteration cap; unset means 10·max(H,W)·sqrt(min(H,W)) capped at 20000",
    )
    eps_pos: float = Field(
        default=1e-6,
        gt=0,
        allow_inf_nan=False,
        description="Positivity floor for log arguments (relative units)",
    )

    def resolve_max_iter(self, shape: tuple[int, int]) -> int:
        """Iteration cap for a raster of the given shape."""
        if self.cg_max_iter is not None:
            return self.cg_max_iter
        height, width = shape
        default = math.ceil(10 * max(height, width) * math.sqrt(min(height, width)))
        return max(1, min(MAX_CG_ITER_CAP, default))


class LwlrConfig(BaseModel):
    """Local weighted linear regression baseline parameters."""

    model_config = ConfigDict(frozen=True)

    bandwidth: Optional[float] = Field(
        default=None,
        gt=0,
        description="Gaussian kernel std in pixels; unset means max(H,W)/8",
    )
    ridge: float = Field(
        default=1e-3, ge=0, allow_inf_nan=False, description="Pull toward the global fit"
    )
    min_effective_weight: float = Field(
        default=1e-6,
        ge=0,
        description="Kernel mass below which a pixel falls back to the global fit",
    )

    def resolve_bandwidth(self, shape: tuple[int, int]) -> float:
        if self.bandwidth is not None:
            return self.bandwidth
        return max(shape) / 8.0


class LossWeights(BaseModel):
    """Weights and neighborhood parameters of the point-map training losses."""

    model_config = ConfigDict(frozen=True)

    lambda_local: float = Field(default=1.0, ge=0, allow_inf_nan=False)
    lambda_normal: float = Field(default=1.0, ge=0, allow_inf_nan=False)
    anchor_count: int = Field(default=64, gt=0, description="Sphere anchors per evaluation")
    radius_ratio: float = Field(
        default=0.1, gt=0, le=1, description="Sphere radius as a fraction of median ‖P̂‖"
    )


class SampleSpec(BaseModel):
    """Resolved sparse sampling protocol."""

    model_config = ConfigDict(frozen=True)

    pattern: SamplePattern
    density: Optional[float] = Field(
        default=None, gt=0, le=1, description="Fraction of valid pixels"
    )
    count: Optional[int] = Field(default=None, ge=1, description="Keypoints per frame")
    lines: Optional[int] = Field(default=None, ge=1, description="Simulated LiDAR beams")
    noise_sigma: float = Field(
        default=0.0, ge=0, allow_inf_nan=False, description="Multiplicative noise std"
    )
    seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def _pattern_fields(self) -> "SampleSpec":
        required = {"random": "density", "keypoint": "count", "lidar": "lines"}[self.pattern]
        if getattr(self, required) is None:
            raise ValueError(f"pattern {self.pattern!r} requires {required!r}")
        return self

    def token(self) -> str:
        """Short cell label such as ``random:0.03`` or ``lidar:16~0.01``."""
        value = {"random": self.density, "keypoint": self.count, "lidar": self.lines}[
            self.pattern
        ]
        label = f"{self.pattern}:{value}"
        if self.noise_sigma > 0:
            label += f"~{self.noise_sigma}"
        return label
