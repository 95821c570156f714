"""Integration tests for method dispatch and the ablation runner."""

import statistics

import numpy as np
import pytest

from poissondepth.core.config import SolverConfig
from poissondepth.core.metrics import depth_metrics
from poissondepth.core.pipeline import (
    ABLATION_ARMS,
    AblationRunner,
    CompletionMethod,
    complete,
)
from poissondepth.core.types import DepthRaster


@pytest.fixture
def distorted_scene(make_depth):
    """32×32 ground truth and a shifted relative depth with a left-to-right scale drift."""
    gt = make_depth(32, 32, seed=11)
    drift = 1.0 + 0.3 * np.arange(32) / 31.0
    relative = (gt * drift - 1.5) / 0.8
    return DepthRaster.dense(gt), DepthRaster.dense(relative, unit="relative")


@pytest.fixture
def ablation_runner(distorted_scene):
    """Ablation runner over the distorted scene with a single worker."""
    gt, relative = distorted_scene
    return AblationRunner(gt, relative, threads=1)


@pytest.mark.parametrize("method", list(CompletionMethod))
def test_complete_dispatch(method, distorted_scene, make_anchors):
    """Test that every method yields dense positive metric depth."""
    gt, relative = distorted_scene
    s = make_anchors(gt.data.astype(np.float64), 40, seed=3)

    result = complete(method, relative, s)

    assert result.depth.shape == gt.shape
    assert result.depth.unit == "meters"
    assert result.depth.is_dense
    assert (result.depth.data > 0).all()
    if method in (CompletionMethod.POISSON, CompletionMethod.POISSON_NOGLOBAL):
        assert result.stats is not None and result.stats.converged
    if method is CompletionMethod.GLOBAL:
        assert result.params is not None and result.params.alpha > 0


def test_complete_accepts_method_names(distorted_scene, make_anchors):
    """Test that the plain method string selects the same arm as the enum."""
    gt, relative = distorted_scene
    s = make_anchors(gt.data.astype(np.float64), 20, seed=5)

    by_name = complete("poisson-noglobal", relative, s)
    by_enum = complete(CompletionMethod.POISSON_NOGLOBAL, relative, s)

    np.testing.assert_array_equal(by_name.depth.data, by_enum.depth.data)


def test_ablation_orders_arms(make_depth):
    """Test that Poisson beats global alignment and Poisson without it on sqrt-distorted scenes."""
    rels: dict[str, list[float]] = {arm.value: [] for arm in ABLATION_ARMS}
    for seed in range(20):
        gt = make_depth(32, 32, seed=seed)
        scene = AblationRunner(
            DepthRaster.dense(gt),
            DepthRaster.dense(np.sqrt(gt), unit="relative"),
            threads=1,
        )

        summary = scene.run(["random:0.03"], [seed])

        assert summary.arms == [arm.value for arm in ABLATION_ARMS]
        for arm, metrics in summary.cells[0].metrics.items():
            rels[arm].append(metrics.rel)

    median = {arm: statistics.median(values) for arm, values in rels.items()}
    assert median["poisson"] < median["global"]
    assert median["poisson"] < median["poisson-noglobal"]


def test_ablation_cells_and_rank_sums(ablation_runner):
    """Test cell labels, anchor counts and the per-cell rank-sum identity."""
    summary = ablation_runner.run(["random:0.05", "random:0.1~0.01"], [0, 1])

    assert summary.patterns == ["random:0.05", "random:0.1~0.01"]
    assert summary.seeds == [0, 1]
    assert summary.ranking.cells == [
        "random:0.05/seed=0/rel",
        "random:0.05/seed=1/rel",
        "random:0.1~0.01/seed=0/rel",
        "random:0.1~0.01/seed=1/rel",
    ]
    assert [cell.anchors for cell in summary.cells] == [51, 51, 102, 102]
    for ranks in summary.ranking.cell_ranks.values():
        assert sum(ranks.values()) == 10.0


def test_ablation_independent_of_threads(distorted_scene):
    """Test that the worker count never changes the summary."""
    gt, relative = distorted_scene
    patterns, seeds = ["random:0.05"], [0, 1, 2]

    single = AblationRunner(gt, relative, threads=1).run(patterns, seeds)
    multi = AblationRunner(gt, relative, threads=3).run(patterns, seeds)

    assert single == multi


def test_ablation_rejects_bad_sweeps(ablation_runner):
    """Test repeated cells and empty sweeps."""
    with pytest.raises(ValueError, match="must not repeat"):
        ablation_runner.run(["random:0.05", "random:0.05"], [0])
    with pytest.raises(ValueError, match="at least one"):
        ablation_runner.run([], [0])


def test_ablation_records_timings(ablation_runner):
    """Test that per-arm timings are accumulated on the runner."""
    ablation_runner.run(["random:0.05"], [0])

    timings = ablation_runner.timing.get_timings()
    assert {"sweep", "sampling", "poisson", "global"} <= set(timings)


def test_lambda_trades_anchor_fit(distorted_scene, make_anchors):
    """Test that a larger data weight pulls the solution closer to the anchors."""
    gt, relative = distorted_scene
    s = make_anchors(gt.data.astype(np.float64), 30, seed=8)

    def anchor_error(lam):
        depth = complete(CompletionMethod.POISSON, relative, s, SolverConfig(lam=lam)).depth
        return float(np.abs(depth.data[s.rows, s.cols] - s.depths).max())

    assert anchor_error(100.0) < anchor_error(0.1)
    assert depth_metrics(
        complete(CompletionMethod.POISSON, relative, s).depth, gt
    ).rel < 0.1
