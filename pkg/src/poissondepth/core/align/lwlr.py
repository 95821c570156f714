"""Local weighted linear regression (LWLR) alignment baseline.

Every valid pixel q gets its own (scale, shift) fitted to all anchors with Gaussian
spatial weights centered at q, plus a ridge term pulling the pair toward the global fit.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np
import structlog

from poissondepth.core.align.global_affine import anchor_pairs, global_affine_align
from poissondepth.core.config import LwlrConfig
from poissondepth.core.settings import get_settings
from poissondepth.core.types import AffineParams, DepthRaster, SparseDepth

logger = structlog.get_logger(__name__)

_ROWS_PER_BLOCK = 16


def _row_sum(values: np.ndarray) -> np.ndarray:
    """Sequential per-row sums so a pixel's result never depends on its block."""
    if values.shape[1] == 0:
        return np.zeros(values.shape[0])
    return np.cumsum(values, axis=1)[:, -1]


def _solve_block(
    rows: np.ndarray,
    cols: np.ndarray,
    anchor_rc: np.ndarray,
    anchor_x: np.ndarray,
    anchor_y: np.ndarray,
    global_params: AffineParams,
    bandwidth: float,
    cfg: LwlrConfig,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-pixel weighted 2×2 solves; returns (alpha, beta, fallback flags)."""
    dr = rows[:, None].astype(np.float64) - anchor_rc[None, :, 0]
    dc = cols[:, None].astype(np.float64) - anchor_rc[None, :, 1]
    weights = np.exp(-(dr * dr + dc * dc) / (2.0 * bandwidth * bandwidth))

    sw = _row_sum(weights)
    swx = _row_sum(weights * anchor_x)
    swy = _row_sum(weights * anchor_y)
    swxx = _row_sum(weights * (anchor_x * anchor_x))
    swxy = _row_sum(weights * (anchor_x * anchor_y))

    a11 = swxx + cfg.ridge
    a12 = swx
    a22 = sw + cfg.ridge
    b1 = swxy + cfg.ridge * global_params.alpha
    b2 = swy + cfg.ridge * global_params.beta
    det = a11 * a22 - a12 * a12

    scale_ref = np.maximum(np.abs(a11 * a22), np.finfo(np.float64).tiny)
    fallback = (sw < cfg.min_effective_weight) | ~(np.abs(det) > 1e-14 * scale_ref)
    safe_det = np.where(fallback, 1.0, det)
    alpha = np.where(fallback, global_params.alpha, (a22 * b1 - a12 * b2) / safe_det)
    beta = np.where(fallback, global_params.beta, (a11 * b2 - a12 * b1) / safe_det)
    return alpha, beta, fallback


def lwlr_params(
    d_r: DepthRaster,
    s: SparseDepth,
    cfg: Optional[LwlrConfig] = None,
    threads: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-pixel (scale, shift) maps in float64.

    Returns:
        Tuple of (alpha_map, beta_map, fallback_map); invalid pixels hold NaN and False
    """
    cfg = cfg or LwlrConfig()
    global_params = global_affine_align(d_r, s)
    anchor_x, anchor_y = anchor_pairs(d_r, s)
    ordered = s.sorted()
    anchor_rc = np.stack([ordered.rows, ordered.cols], axis=1).astype(np.float64)
    bandwidth = cfg.resolve_bandwidth(d_r.shape)

    alpha_map = np.full(d_r.shape, np.nan, dtype=np.float64)
    beta_map = np.full(d_r.shape, np.nan, dtype=np.float64)
    fallback_map = np.zeros(d_r.shape, dtype=bool)
    blocks = [
        (start, min(start + _ROWS_PER_BLOCK, d_r.height))
        for start in range(0, d_r.height, _ROWS_PER_BLOCK)
    ]

    def run(block: tuple[int, int]) -> None:
        start, stop = block
        rows, cols = np.nonzero(d_r.mask[start:stop])
        if rows.size == 0:
            return
        rows = rows + start
        alpha, beta, fallback = _solve_block(
            rows, cols, anchor_rc, anchor_x, anchor_y, global_params, bandwidth, cfg
        )
        alpha_map[rows, cols] = alpha
        beta_map[rows, cols] = beta
        fallback_map[rows, cols] = fallback

    workers = threads or get_settings().threads
    with ThreadPoolExecutor(max_workers=workers) as executor:
        list(executor.map(run, blocks))

    fallbacks = int(np.count_nonzero(fallback_map))
    if fallbacks:
        logger.warning("LWLR fell back to global fit", pixels=fallbacks, bandwidth=bandwidth)
    logger.debug("LWLR fitted", anchors=len(s), bandwidth=bandwidth, ridge=cfg.ridge)
    return alpha_map, beta_map, fallback_map


def lwlr_align(
    d_r: DepthRaster,
    s: SparseDepth,
    cfg: Optional[LwlrConfig] = None,
    threads: Optional[int] = None,
) -> DepthRaster:
    """Align relative depth with per-pixel spatially weighted affine fits.

    Args:
        d_r: Relative depth
        s: Metric anchors (at least 2)
        cfg: Kernel bandwidth, ridge weight and fallback threshold
        threads: Worker cap; defaults to the THREADS setting

    Returns:
        Metric depth; pixels whose result is not positive are invalid
    """
    alpha_map, beta_map, _ = lwlr_params(d_r, s, cfg, threads)
    with np.errstate(invalid="ignore"):
        metric = (alpha_map * d_r.data.astype(np.float64) + beta_map).astype(np.float32)
        mask = d_r.mask & np.isfinite(metric) & (metric > 0)
    return DepthRaster(data=np.where(mask, metric, 0.0), mask=mask, unit="meters")
