"""Exception hierarchy shared by every poissondepth module."""

from pathlib import Path
from typing import TYPE_CHECKING, Optional, Union

if TYPE_CHECKING:
    from poissondepth.core.poisson.cg import SolveStats


class PoissonDepthError(Exception):
    """Base exception for all poissondepth errors."""


class RasterValidationError(PoissonDepthError):
    """A raster violates its type invariants."""

    def __init__(self, message: str, pixel: Optional[tuple[int, int]] = None):
        self.pixel = pixel
        super().__init__(message)


class SparseDepthError(PoissonDepthError):
    """Sparse observations are out of bounds, duplicated or non-positive."""


class AlignmentError(PoissonDepthError):
    """An affine fit is under-determined or degenerate."""


class GradientFieldError(PoissonDepthError):
    """The target log-gradient field cannot be built from the relative depth."""


class SolverBreakdownError(PoissonDepthError):
    """Conjugate gradient hit a non-finite or non-positive curvature step."""

    def __init__(self, iteration: int, message: str):
        self.iteration = iteration
        super().__init__(f"CG breakdown at iteration {iteration}: {message}")


class ConvergenceError(PoissonDepthError):
    """The solver stopped at its iteration cap without meeting the tolerance."""

    def __init__(self, stats: "SolveStats"):
        self.stats = stats
        super().__init__(
            f"CG did not converge after {stats.iterations} iterations "
            f"(relative residual {stats.final_relative_residual:.3e})"
        )


class SamplingError(PoissonDepthError):
    """A sparse sampling protocol cannot be applied to the input."""


class MetricsError(PoissonDepthError):
    """An evaluation has nothing to evaluate or an incomplete table."""


class FormatError(PoissonDepthError):
    """A file does not match its declared format."""

    def __init__(
        self,
        path: Union[str, Path],
        message: str,
        line: Optional[int] = None,
    ):
        self.path = str(path)
        self.line = line
        location = f"{path}:{line}" if line is not None else f"{path}"
        super().__init__(f"{location}: {message}")
