"""Point-map geometry: projection, normals, training losses, affine-invariant alignment."""

from poissondepth.core.geometry.affine import affine_invariant_align, apply_point_affine
from poissondepth.core.geometry.losses import (
    LossBreakdown,
    compute_losses,
    joint_mask,
    loss_global,
    loss_local,
    loss_normal,
    sample_loss_anchors,
    total_loss,
)
from poissondepth.core.geometry.normals import estimate_normals
from poissondepth.core.geometry.projection import (
    backproject,
    extract_z,
    lift_point_map,
    pixel_rays,
)

__all__ = [
    "LossBreakdown",
    "affine_invariant_align",
    "apply_point_affine",
    "backproject",
    "compute_losses",
    "estimate_normals",
    "extract_z",
    "joint_mask",
    "lift_point_map",
    "loss_global",
    "loss_local",
    "loss_normal",
    "pixel_rays",
    "sample_loss_anchors",
    "total_loss",
]
