"""Ablation sweep over sampling patterns and seeds for the four alignment methods."""

from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import structlog
from pydantic import BaseModel, Field

from poissondepth.core.config import LwlrConfig, SampleSpec, SolverConfig
from poissondepth.core.metrics import DepthMetrics, RankingResult, aggregate_ranking, depth_metrics
from poissondepth.core.pipeline.completion import CompletionMethod, complete
from poissondepth.core.sampling import draw_samples, parse_pattern_token
from poissondepth.core.settings import get_settings
from poissondepth.core.types import CameraIntrinsics, DepthRaster
from poissondepth.core.utils import TimingContext

logger = structlog.get_logger(__name__)

ABLATION_ARMS = (
    CompletionMethod.GLOBAL,
    CompletionMethod.LWLR,
    CompletionMethod.POISSON,
    CompletionMethod.POISSON_NOGLOBAL,
)

RANKED_METRIC = "rel"


class AblationCell(BaseModel):
    """Metrics of every arm on one (pattern, seed) draw."""

    pattern: str
    seed: int
    anchors: int
    metrics: dict[str, DepthMetrics]
    warnings: list[str] = Field(default_factory=list)

    @property
    def label(self) -> str:
        return f"{self.pattern}/seed={self.seed}/{RANKED_METRIC}"


class AblationSummary(BaseModel):
    arms: list[str]
    patterns: list[str]
    seeds: list[int]
    cells: list[AblationCell]
    ranking: RankingResult


class AblationRunner:
    """Runs every arm on every (pattern, seed) cell and ranks arms by REL."""

    def __init__(
        self,
        gt: DepthRaster,
        relative: DepthRaster,
        gray: Optional[DepthRaster] = None,
        intrinsics: Optional[CameraIntrinsics] = None,
        solver: Optional[SolverConfig] = None,
        lwlr: Optional[LwlrConfig] = None,
        threads: Optional[int] = None,
    ):
        """Initialize runner.

        Args:
            gt: Dense metric ground truth, also the anchor source
            relative: Relative depth to align
            gray: Grayscale image for keypoint patterns
            intrinsics: Camera intrinsics for LiDAR patterns
            solver: Poisson solver parameters
            lwlr: LWLR baseline parameters
            threads: Cells evaluated concurrently; defaults to the THREADS setting
        """
        self.gt = gt
        self.relative = relative
        self.gray = gray
        self.intrinsics = intrinsics
        self.solver = solver or SolverConfig()
        self.lwlr = lwlr or LwlrConfig()
        self.threads = threads or get_settings().threads
        self.timing = TimingContext()

    def _run_cell(self, spec: SampleSpec) -> tuple[AblationCell, dict[str, float]]:
        timing = TimingContext()
        with timing.stage("sampling"):
            s = draw_samples(spec, self.gt, self.gray, self.intrinsics)

        metrics: dict[str, DepthMetrics] = {}
        for arm in ABLATION_ARMS:
            with timing.stage(arm.value):
                # Cells already run in parallel; keep LWLR single-threaded inside them.
                result = complete(arm, self.relative, s, self.solver, self.lwlr, threads=1)
                metrics[arm.value] = depth_metrics(result.depth, self.gt)

        cell = AblationCell(
            pattern=spec.token(),
            seed=spec.seed,
            anchors=len(s),
            metrics=metrics,
            warnings=list(s.warnings),
        )
        logger.debug(
            "Ablation cell finished",
            pattern=cell.pattern,
            seed=cell.seed,
            rel={arm: m.rel for arm, m in metrics.items()},
        )
        return cell, timing.get_timings()

    def run(self, patterns: Sequence[str], seeds: Sequence[int]) -> AblationSummary:
        """Evaluate all cells; results are merged in (pattern, seed) order."""
        if not patterns or not seeds:
            raise ValueError("ablation needs at least one pattern and one seed")
        specs = [parse_pattern_token(token, seed) for token in patterns for seed in seeds]
        labels = [(spec.token(), spec.seed) for spec in specs]
        if len(set(labels)) != len(labels):
            raise ValueError("ablation patterns and seeds must not repeat")
        logger.info("Ablation started", cells=len(specs), threads=self.threads)

        with self.timing.stage("sweep"):
            with ThreadPoolExecutor(max_workers=self.threads) as executor:
                outcomes = list(executor.map(self._run_cell, specs))

        cells = []
        for cell, timings in outcomes:
            cells.append(cell)
            self.timing.merge(timings)
        logger.debug("Ablation stage totals", **self.timing.get_timings())

        table = {
            arm.value: {cell.label: cell.metrics[arm.value].rel for cell in cells}
            for arm in ABLATION_ARMS
        }
        ranking = aggregate_ranking(table)
        logger.info("Ablation finished", mean_ranks=ranking.mean_ranks)
        return AblationSummary(
            arms=[arm.value for arm in ABLATION_ARMS],
            patterns=[spec.token() for spec in specs[:: len(seeds)]],
            seeds=list(seeds),
            cells=cells,
            ranking=ranking,
        )
