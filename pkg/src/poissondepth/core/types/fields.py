"""Target log-gradient fields for the gradient-domain solve."""

from dataclasses import dataclass
from typing import Literal

import numpy as np

BoundaryConvention = Literal["neumann-forward"]


@dataclass(frozen=True, eq=False)
class GradientField:
    """Forward-difference log-depth gradients.

    ``gx[r, c] = L[r, c+1] - L[r, c]`` and ``gy[r, c] = L[r+1, c] - L[r, c]``. The last
    column of ``gx`` and the last row of ``gy`` are undefined: stored as 0 and excluded
    from the energy.
    """

    gx: np.ndarray
    gy: np.ndarray
    floored_count: int = 0
    boundary: BoundaryConvention = "neumann-forward"

    def __post_init__(self):
        gx = np.array(self.gx, dtype=np.float64)
        gy = np.array(self.gy, dtype=np.float64)
        if gx.shape != gy.shape or gx.ndim != 2:
            raise ValueError(f"gradient components differ in shape: {gx.shape} vs {gy.shape}")
        gx.setflags(write=False)
        gy.setflags(write=False)
        object.__setattr__(self, "gx", gx)
        object.__setattr__(self, "gy", gy)

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self.gx.shape[0]), int(self.gx.shape[1]))

    def divergence(self) -> np.ndarray:
        """Adjoint of the forward-difference gradient applied to the field, flattened.

        Each defined edge (p → q) with target g contributes ``-g`` at p and ``+g`` at q,
        which is the right-hand side of the normal equations of the gradient term.
        """
        out = np.zeros(self.shape, dtype=np.float64)
        gx = self.gx[:, :-1]
        gy = self.gy[:-1, :]
        out[:, :-1] -= gx
        out[:, 1:] += gx
        out[:-1, :] -= gy
        out[1:, :] += gy
        return out.reshape(-1)
