"""Affine and locally weighted alignment of relative depth to metric anchors."""

from poissondepth.core.align.global_affine import (
    anchor_pairs,
    apply_affine,
    fit_affine,
    global_affine_align,
)
from poissondepth.core.align.lwlr import lwlr_align, lwlr_params

__all__ = [
    "anchor_pairs",
    "apply_affine",
    "fit_affine",
    "global_affine_align",
    "lwlr_align",
    "lwlr_params",
]
