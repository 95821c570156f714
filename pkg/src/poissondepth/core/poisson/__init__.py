"""Gradient-domain completion: log-gradient targets, screened Poisson operator, CG."""

from poissondepth.core.poisson.cg import SolveStats, conjugate_gradient
from poissondepth.core.poisson.complete import (
    poisson_complete,
    poisson_complete_no_global,
    solve_with_shift,
)
from poissondepth.core.poisson.gradient import log_gradient
from poissondepth.core.poisson.operator import ScreenedPoissonOperator, apply_system_operator

__all__ = [
    "ScreenedPoissonOperator",
    "SolveStats",
    "apply_system_operator",
    "conjugate_gradient",
    "log_gradient",
    "poisson_complete",
    "poisson_complete_no_global",
    "solve_with_shift",
]
