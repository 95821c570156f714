"""Coarse dense depth by screened Poisson integration of relative-depth gradients.

The solve works on ``u = log D``: the gradient term pulls ∇u toward the log-gradient
of the shifted relative depth and the data term pulls u toward ``log S`` at anchors.
"""

from typing import Optional

import numpy as np
import structlog

from poissondepth.core.align import global_affine_align
from poissondepth.core.config import SolverConfig
from poissondepth.core.errors import ConvergenceError, SparseDepthError
from poissondepth.core.poisson.cg import SolveStats, conjugate_gradient
from poissondepth.core.poisson.gradient import log_gradient
from poissondepth.core.poisson.operator import ScreenedPoissonOperator
from poissondepth.core.types import DepthRaster, SparseDepth, require_min_size, validate_raster

logger = structlog.get_logger(__name__)


def _check_inputs(d_r: DepthRaster, s: SparseDepth, cfg: SolverConfig) -> None:
    validate_raster(d_r)
    require_min_size(d_r)
    s.validate()
    if s.shape != d_r.shape:
        raise SparseDepthError(f"sparse dims {s.shape} differ from raster dims {d_r.shape}")
    if len(s) < 2:
        raise SparseDepthError(f"need at least 2 anchors, got {len(s)}")
    if not cfg.lam > 0:
        raise ValueError(f"lambda must be positive for a completion solve, got {cfg.lam}")


def solve_with_shift(
    d_r: DepthRaster, s: SparseDepth, cfg: SolverConfig, shift: float
) -> tuple[DepthRaster, SolveStats]:
    """Integrate ``∇log(d_r + shift)`` anchored at s.

    Raises:
        ConvergenceError: CG stopped at its cap; the error carries the stats
    """
    _check_inputs(d_r, s, cfg)
    field = log_gradient(d_r, shift, cfg.eps_pos)
    operator = ScreenedPoissonOperator.from_sparse(s, cfg.lam)

    rhs = field.divergence()
    rhs[s.flat_indices()] += cfg.lam * np.log(s.depths)
    u, stats = conjugate_gradient(operator, rhs, cfg, cfg.resolve_max_iter(d_r.shape))
    if not stats.converged:
        logger.error(
            "Poisson solve did not converge",
            iterations=stats.iterations,
            residual=stats.final_relative_residual,
        )
        raise ConvergenceError(stats)

    logger.info(
        "Poisson solve finished",
        shape=d_r.shape,
        anchors=len(s),
        shift=shift,
        iterations=stats.iterations,
        residual=stats.final_relative_residual,
    )
    depth = np.exp(u).reshape(d_r.shape).astype(np.float32)
    return DepthRaster.dense(depth, unit="meters"), stats


def poisson_complete(
    d_r: DepthRaster, s: SparseDepth, cfg: Optional[SolverConfig] = None
) -> tuple[DepthRaster, SolveStats]:
    """Globally align, shift by gamma = beta/alpha, then integrate.

    Args:
        d_r: Dense relative depth
        s: At least 2 metric anchors on the same grid
        cfg: Solver parameters

    Returns:
        Tuple of (fully valid metric depth, solver stats)
    """
    cfg = cfg or SolverConfig()
    _check_inputs(d_r, s, cfg)
    params = global_affine_align(d_r, s)
    return solve_with_shift(d_r, s, cfg, params.gamma)


def poisson_complete_no_global(
    d_r: DepthRaster, s: SparseDepth, cfg: Optional[SolverConfig] = None
) -> tuple[DepthRaster, SolveStats]:
    """Integrate the unshifted relative depth (gamma forced to 0)."""
    return solve_with_shift(d_r, s, cfg or SolverConfig(), 0.0)
