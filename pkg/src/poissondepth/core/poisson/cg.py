"""Jacobi-preconditioned conjugate gradient with deterministic reductions."""

import math
import time
from typing import Callable, Optional, Union

import numpy as np
import structlog
from pydantic import BaseModel, Field
from scipy.sparse import spmatrix
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from poissondepth.core.config import SolverConfig
from poissondepth.core.errors import RasterValidationError, SolverBreakdownError
from poissondepth.core.poisson.operator import ScreenedPoissonOperator
from poissondepth.core.utils.reduction import ordered_dot

logger = structlog.get_logger(__name__)

Operator = Union[ScreenedPoissonOperator, np.ndarray, spmatrix, LinearOperator]

# Recompute r = b - A·u from scratch this often to stop recurrence drift.
RESIDUAL_REPLACEMENT_INTERVAL = 50


class SolveStats(BaseModel):
    """Outcome of one CG solve."""

    iterations: int = Field(..., ge=0)
    final_relative_residual: float = Field(..., ge=0, description="‖b − A·u‖ / ‖b‖")
    converged: bool
    wall_time: float = Field(default=0.0, ge=0, description="Seconds spent in the solver")


def _norm(v: np.ndarray) -> float:
    return math.sqrt(ordered_dot(v, v))


def _unpack(operator: Operator, n: int) -> tuple[Callable[[np.ndarray], np.ndarray], np.ndarray]:
    """Matvec callable and Jacobi diagonal (ones when the operator exposes none)."""
    if isinstance(operator, ScreenedPoissonOperator):
        if operator.size != n:
            raise RasterValidationError(f"operator size {operator.size} does not match b ({n})")
        return operator.matvec, operator.diagonal()

    if isinstance(operator, np.ndarray):
        diag = np.diagonal(operator).astype(np.float64)
    elif hasattr(operator, "diagonal"):
        diag = np.asarray(operator.diagonal(), dtype=np.float64)
    else:
        diag = np.ones(n, dtype=np.float64)
    linop = aslinearoperator(operator)
    if linop.shape != (n, n):
        raise RasterValidationError(f"operator shape {linop.shape} does not match b ({n})")

    def matvec(v: np.ndarray) -> np.ndarray:
        return np.asarray(linop.matvec(v), dtype=np.float64).reshape(-1)

    return matvec, diag


def conjugate_gradient(
    operator: Operator,
    b: np.ndarray,
    cfg: Optional[SolverConfig] = None,
    max_iter: Optional[int] = None,
) -> tuple[np.ndarray, SolveStats]:
    """Solve ``A·u = b`` from ``u = 0``.

    Args:
        operator: Symmetric positive semidefinite operator
        b: Right-hand side
        cfg: Tolerance and iteration cap
        max_iter: Iteration cap overriding ``cfg.cg_max_iter``; without either, raster
            operators use the size-based default and other systems use 10·n

    Returns:
        Tuple of (u, stats). A solve that hits the cap returns ``converged=False``.

    Raises:
        SolverBreakdownError: non-finite values or non-positive curvature ``pᵀA·p``
    """
    cfg = cfg or SolverConfig()
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    n = b.size
    if not np.isfinite(b).all():
        raise SolverBreakdownError(0, "right-hand side is not finite")
    if max_iter is None:
        max_iter = cfg.cg_max_iter
    if max_iter is None:
        if isinstance(operator, ScreenedPoissonOperator):
            max_iter = cfg.resolve_max_iter(operator.shape)
        else:
            max_iter = max(1, 10 * n)

    matvec, diag = _unpack(operator, n)
    inv_diag = np.ones(n, dtype=np.float64)
    usable = np.isfinite(diag) & (diag > 0)
    inv_diag[usable] = 1.0 / diag[usable]

    started = time.perf_counter()
    u = np.zeros(n, dtype=np.float64)
    b_norm = _norm(b)
    if b_norm == 0.0:
        return u, SolveStats(iterations=0, final_relative_residual=0.0, converged=True)

    r = b.copy()
    z = inv_diag * r
    p = z.copy()
    rz = ordered_dot(r, z)
    relative = 1.0
    iteration = 0

    while iteration < max_iter:
        iteration += 1
        ap = matvec(p)
        curvature = ordered_dot(p, ap)
        if not math.isfinite(curvature):
            raise SolverBreakdownError(iteration, "non-finite curvature pᵀA·p")
        if curvature <= 0.0:
            raise SolverBreakdownError(
                iteration, f"non-positive curvature pᵀA·p = {curvature:.3e}"
            )
        step = rz / curvature
        u += step * p

        if iteration % RESIDUAL_REPLACEMENT_INTERVAL == 0:
            r = b - matvec(u)
        else:
            r -= step * ap
        relative = _norm(r) / b_norm
        if not math.isfinite(relative):
            raise SolverBreakdownError(iteration, "non-finite residual")

        if relative <= cfg.cg_tol:
            # The recurrence can drift below the true residual; confirm before stopping.
            r = b - matvec(u)
            relative = _norm(r) / b_norm
            if relative <= cfg.cg_tol:
                break

        z = inv_diag * r
        rz_next = ordered_dot(r, z)
        p = z + (rz_next / rz) * p
        rz = rz_next
    else:
        relative = _norm(b - matvec(u)) / b_norm

    stats = SolveStats(
        iterations=iteration,
        final_relative_residual=relative,
        converged=relative <= cfg.cg_tol,
        wall_time=time.perf_counter() - started,
    )
    logger.debug(
        "CG finished",
        iterations=stats.iterations,
        residual=stats.final_relative_residual,
        converged=stats.converged,
    )
    return u, stats
