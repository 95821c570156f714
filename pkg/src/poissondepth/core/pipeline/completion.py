"""Dispatch of the four coarse alignment methods."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from poissondepth.core.align import apply_affine, global_affine_align, lwlr_align
from poissondepth.core.config import LwlrConfig, SolverConfig
from poissondepth.core.poisson import SolveStats, poisson_complete, poisson_complete_no_global
from poissondepth.core.types import AffineParams, DepthRaster, SparseDepth


class CompletionMethod(str, Enum):
    POISSON = "poisson"
    POISSON_NOGLOBAL = "poisson-noglobal"
    GLOBAL = "global"
    LWLR = "lwlr"


@dataclass(frozen=True)
class CompletionResult:
    """Metric depth plus whichever diagnostics the method produces."""

    depth: DepthRaster
    stats: Optional[SolveStats] = None
    params: Optional[AffineParams] = None


def complete(
    method: CompletionMethod,
    d_r: DepthRaster,
    s: SparseDepth,
    solver: Optional[SolverConfig] = None,
    lwlr: Optional[LwlrConfig] = None,
    threads: Optional[int] = None,
) -> CompletionResult:
    """Align relative depth to the anchors with the chosen method."""
    method = CompletionMethod(method)
    solver = solver or SolverConfig()
    if method is CompletionMethod.POISSON:
        depth, stats = poisson_complete(d_r, s, solver)
        return CompletionResult(depth=depth, stats=stats)
    if method is CompletionMethod.POISSON_NOGLOBAL:
        depth, stats = poisson_complete_no_global(d_r, s, solver)
        return CompletionResult(depth=depth, stats=stats)
    if method is CompletionMethod.GLOBAL:
        params = global_affine_align(d_r, s)
        return CompletionResult(depth=apply_affine(d_r, params), params=params)
    return CompletionResult(depth=lwlr_align(d_r, s, lwlr, threads))
