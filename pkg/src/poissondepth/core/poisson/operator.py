"""Matrix-free screened Poisson operator ``A = ∇ᵀ∇ + λ·MᵀM``.

∇ is the forward-difference gradient with Neumann boundaries (edges leaving the grid
are skipped), so ∇ᵀ∇ is the 5-point graph Laplacian; M selects the anchor pixels.
"""

import numpy as np

from poissondepth.core.errors import RasterValidationError
from poissondepth.core.types import SparseDepth


class ScreenedPoissonOperator:
    """Symmetric positive semidefinite operator on row-major H·W vectors."""

    def __init__(self, shape: tuple[int, int], anchor_indices: np.ndarray, lam: float):
        """Initialize operator.

        Args:
            shape: Raster (height, width)
            anchor_indices: Unique row-major indices of anchor pixels
            lam: Data-term weight
        """
        self.shape = (int(shape[0]), int(shape[1]))
        self.size = self.shape[0] * self.shape[1]
        self.anchor_indices = np.sort(np.asarray(anchor_indices, dtype=np.int64))
        self.lam = float(lam)

    @classmethod
    def from_sparse(cls, s: SparseDepth, lam: float) -> "ScreenedPoissonOperator":
        s.validate()
        return cls(s.shape, s.flat_indices(), lam)

    def matvec(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=np.float64).reshape(-1)
        if u.size != self.size:
            raise RasterValidationError(
                f"vector length {u.size} does not match raster {self.shape[0]}x{self.shape[1]}"
            )
        grid = u.reshape(self.shape)
        out = np.zeros(self.shape, dtype=np.float64)
        dx = grid[:, 1:] - grid[:, :-1]
        dy = grid[1:, :] - grid[:-1, :]
        out[:, :-1] -= dx
        out[:, 1:] += dx
        out[:-1, :] -= dy
        out[1:, :] += dy
        flat = out.reshape(-1)
        flat[self.anchor_indices] += self.lam * u[self.anchor_indices]
        return flat

    __call__ = matvec

    def diagonal(self) -> np.ndarray:
        """Vertex degree plus λ at anchors."""
        degree = np.zeros(self.shape, dtype=np.float64)
        degree[:, :-1] += 1.0
        degree[:, 1:] += 1.0
        degree[:-1, :] += 1.0
        degree[1:, :] += 1.0
        flat = degree.reshape(-1)
        flat[self.anchor_indices] += self.lam
        return flat

    def to_dense(self) -> np.ndarray:
        """Explicit matrix by applying the operator to unit vectors (small grids only)."""
        eye = np.eye(self.size)
        return np.stack([self.matvec(eye[:, j]) for j in range(self.size)], axis=1)


def apply_system_operator(u: np.ndarray, s: SparseDepth, lam: float) -> np.ndarray:
    """Apply ``A = ∇ᵀ∇ + λ·MᵀM`` to u on the raster grid of s."""
    return ScreenedPoissonOperator.from_sparse(s, lam).matvec(u)
