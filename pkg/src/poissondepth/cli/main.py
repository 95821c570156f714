"""CLI entry point using typer.

Exit codes: 0 success, 1 usage, 2 input or validation error, 3 solver failure.
JSON results go to standard output; messages and logs go to standard error.
"""

import importlib
import json
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Callable, Iterator, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.table import Table
from typer.core import TyperGroup

from poissondepth.core.config import LossWeights, LwlrConfig, SampleSpec, SolverConfig
from poissondepth.core.errors import ConvergenceError, PoissonDepthError, SolverBreakdownError
from poissondepth.core.geometry import (
    backproject,
    compute_losses,
    extract_z,
    lift_point_map,
)
from poissondepth.core.io import (
    RunReport,
    read_gray,
    read_pfm,
    read_png16,
    read_point_map,
    read_sparse_csv,
    write_pfm,
    write_point_map,
    write_report,
    write_sparse_csv,
)
from poissondepth.core.metrics import (
    affine_invariant_point_metrics,
    depth_metrics,
    point_metrics,
    recover_metric,
)
from poissondepth.core.pipeline import AblationRunner, CompletionMethod, complete as run_completion
from poissondepth.core.sampling import draw_samples, parse_pattern_token, preset_spec
from poissondepth.core.settings import get_settings, load_config_file, resolve
from poissondepth.core.types import CameraIntrinsics, DepthRaster, validate_raster
from poissondepth.core.utils import configure_logging

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_SOLVER = 3

# Exception classes of the click that typer runs on, bundled or standalone.
_click_exceptions = importlib.import_module(typer.BadParameter.__module__)


class ExitCodeGroup(TyperGroup):
    """Command group that reports usage errors with exit code 1 instead of click's 2."""

    def main(self, *args: Any, **kwargs: Any) -> Any:
        kwargs["standalone_mode"] = False
        try:
            code = super().main(*args, **kwargs)
        except _click_exceptions.UsageError as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except typer.Abort:
            typer.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        except _click_exceptions.ClickException as e:
            e.show()
            sys.exit(e.exit_code)
        sys.exit(code if isinstance(code, int) else EXIT_OK)


app = typer.Typer(
    name="poissondepth",
    help="Dense metric depth from relative depth and sparse anchors.",
    cls=ExitCodeGroup,
    add_completion=False,
)
console = Console(stderr=True)


def exit_code_for(err: Exception) -> int:
    if isinstance(err, (ConvergenceError, SolverBreakdownError)):
        return EXIT_SOLVER
    if isinstance(err, (PoissonDepthError, OSError)):
        return EXIT_INPUT
    return EXIT_USAGE


@contextmanager
def _guard() -> Iterator[None]:
    """Turn library errors into an error message and the matching exit code."""
    try:
        yield
    except (PoissonDepthError, ValidationError, ValueError, OSError) as e:
        console.print("[bold red]Error:[/bold red]", escape(str(e)))
        raise typer.Exit(exit_code_for(e))


class _Options:
    """Flag values backed by an optional ``--config`` key=value file."""

    def __init__(self, config: Optional[Path], allowed: set[str]):
        self.values = load_config_file(config) if config is not None else {}
        unknown = sorted(set(self.values) - allowed)
        if unknown:
            raise typer.BadParameter(f"unknown keys {', '.join(unknown)}", param_hint="--config")

    def get(self, flag: Any, key: str, default: Any, cast: Callable[[str], Any] = float) -> Any:
        return resolve(flag, self.values, key, default, cast)


SOLVER_KEYS = {"lambda", "cg_tol", "cg_max_iter", "eps_pos"}
LWLR_KEYS = {"bandwidth", "ridge"}
SAMPLE_KEYS = {"pattern", "density", "count", "lines", "noise_sigma", "seed"}
LOSS_KEYS = {"lambda_local", "lambda_normal", "anchors", "radius_ratio", "seed"}


def _solver_config(
    opts: _Options,
    lam: Optional[float],
    cg_tol: Optional[float],
    cg_max_iter: Optional[int],
    eps_pos: Optional[float],
) -> SolverConfig:
    return SolverConfig(
        lam=opts.get(lam, "lambda", 1.0),
        cg_tol=opts.get(cg_tol, "cg_tol", 1e-8),
        cg_max_iter=opts.get(cg_max_iter, "cg_max_iter", None, int),
        eps_pos=opts.get(eps_pos, "eps_pos", 1e-6),
    )


def _lwlr_config(opts: _Options, bandwidth: Optional[float], ridge: Optional[float]) -> LwlrConfig:
    return LwlrConfig(
        bandwidth=opts.get(bandwidth, "bandwidth", None),
        ridge=opts.get(ridge, "ridge", 1e-3),
    )


def _solver_echo(solver: SolverConfig, shape: tuple[int, int]) -> dict[str, Any]:
    return {
        "lambda": solver.lam,
        "cg_tol": solver.cg_tol,
        "cg_max_iter": solver.resolve_max_iter(shape),
        "eps_pos": solver.eps_pos,
    }


def _lwlr_echo(lwlr: LwlrConfig, shape: tuple[int, int]) -> dict[str, Any]:
    return {
        "bandwidth": lwlr.resolve_bandwidth(shape),
        "ridge": lwlr.ridge,
        "min_effective_weight": lwlr.min_effective_weight,
    }


def _read_depth(path: Path) -> DepthRaster:
    """Metric depth from PFM, or from millimeter PNG when the suffix is .png."""
    raster = read_png16(path) if path.suffix.lower() == ".png" else read_pfm(path, unit="meters")
    validate_raster(raster)
    return raster


def _parse_intrinsics(text: Optional[str]) -> Optional[CameraIntrinsics]:
    if text is None:
        return None
    try:
        return CameraIntrinsics.parse(text)
    except ValueError as e:
        raise typer.BadParameter(str(e), param_hint="--intrinsics") from e


def _shape_inputs(**paths: Optional[Path]) -> dict[str, Any]:
    return {name: str(path) for name, path in paths.items() if path is not None}


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(
        None,
        "--log-level",
        help="Log level for standard error [default: POISSONDEPTH_LOG_LEVEL or WARNING]",
    ),
):
    """Poisson depth completion toolkit."""
    with _guard():
        configure_logging(log_level or get_settings().log_level)


@app.command()
def complete(
    relative: Optional[Path] = typer.Option(
        None, "--relative", help="Relative depth PFM (dense, relative units)"
    ),
    sparse: Path = typer.Option(..., "--sparse", help="Anchors CSV (row,col,depth_m; meters)"),
    out: Path = typer.Option(..., "--out", help="Output metric depth PFM (meters)"),
    method: Optional[CompletionMethod] = typer.Option(
        None, "--method", help="Alignment method [default: poisson]"
    ),
    lam: Optional[float] = typer.Option(
        None, "--lambda", help="Data-term weight, dimensionless [default: 1.0]"
    ),
    cg_tol: Optional[float] = typer.Option(
        None, "--cg-tol", help="CG relative residual tolerance ‖b−Au‖/‖b‖ [default: 1e-8]"
    ),
    cg_max_iter: Optional[int] = typer.Option(
        None,
        "--cg-max-iter",
        help="CG iteration cap [default: ceil(10·max(H,W)·sqrt(min(H,W))), at most 20000]",
    ),
    eps_pos: Optional[float] = typer.Option(
        None, "--eps-pos", help="Positivity floor of d_r + gamma, relative units [default: 1e-6]"
    ),
    bandwidth: Optional[float] = typer.Option(
        None, "--bandwidth", help="LWLR kernel std in pixels [default: max(H,W)/8]"
    ),
    ridge: Optional[float] = typer.Option(
        None, "--ridge", help="LWLR pull toward the global fit, dimensionless [default: 0.001]"
    ),
    relative_points: Optional[Path] = typer.Option(
        None,
        "--relative-points",
        help="PREFIX of a relative point map; its z channel is completed instead of --relative",
    ),
    out_points: Optional[Path] = typer.Option(
        None, "--out-points", help="PREFIX for the metric point map (needs --relative-points)"
    ),
    report: Optional[Path] = typer.Option(None, "--report", help="JSON report path"),
    timing: bool = typer.Option(False, "--timing", help="Report solver wall time (seconds)"),
    config: Optional[Path] = typer.Option(None, "--config", help="key=value file of flag values"),
):
    """Complete relative depth into dense metric depth."""
    if (relative is None) == (relative_points is None):
        raise typer.BadParameter("give exactly one of --relative or --relative-points")
    if out_points is not None and relative_points is None:
        raise typer.BadParameter("--out-points needs --relative-points")

    with _guard():
        opts = _Options(config, SOLVER_KEYS | LWLR_KEYS | {"method"})
        method = CompletionMethod(opts.get(method, "method", CompletionMethod.POISSON, str))
        solver = _solver_config(opts, lam, cg_tol, cg_max_iter, eps_pos)
        lwlr = _lwlr_config(opts, bandwidth, ridge)

        points = None
        if relative_points is not None:
            points = read_point_map(relative_points)
            d_r = extract_z(points).with_unit("relative")
        else:
            d_r = read_pfm(relative, unit="relative")
        validate_raster(d_r)
        s = read_sparse_csv(sparse, d_r.shape)

        run_report = RunReport(
            inputs={
                **_shape_inputs(relative=relative, relative_points=relative_points, sparse=sparse),
                "height": d_r.height,
                "width": d_r.width,
            },
            config={
                "method": method.value,
                **_solver_echo(solver, d_r.shape),
                **(_lwlr_echo(lwlr, d_r.shape) if method is CompletionMethod.LWLR else {}),
            },
        )
        try:
            result = run_completion(method, d_r, s, solver, lwlr)
        except ConvergenceError as e:
            if report is not None:
                write_report(report, run_report.model_copy(update={"solver": e.stats}), timing)
            raise

        write_pfm(out, result.depth)
        if out_points is not None and points is not None:
            write_point_map(out_points, lift_point_map(points, result.depth))
        if report is not None:
            write_report(report, run_report.model_copy(update={"solver": result.stats}), timing)

    if result.stats is not None:
        console.print(
            f"[green]Completed[/green] {d_r.height}x{d_r.width} with {method.value}: "
            f"{result.stats.iterations} iterations, "
            f"residual {result.stats.final_relative_residual:.3e}"
        )
    else:
        console.print(f"[green]Completed[/green] {d_r.height}x{d_r.width} with {method.value}")


@app.command()
def sample(
    gt: Path = typer.Option(..., "--gt", help="Ground-truth depth, PFM or millimeter PNG (meters)"),
    out: Path = typer.Option(..., "--out", help="Output sparse CSV (row,col,depth_m)"),
    pattern: Optional[str] = typer.Option(
        None, "--pattern", help="Sampling protocol: random, keypoint or lidar"
    ),
    preset: Optional[str] = typer.Option(
        None, "--preset", help="Named protocol such as random-3, keypoint-500, lidar-16"
    ),
    density: Optional[float] = typer.Option(
        None, "--density", help="random: fraction of valid pixels in (0, 1]"
    ),
    count: Optional[int] = typer.Option(None, "--count", help="keypoint: points per frame"),
    lines: Optional[int] = typer.Option(None, "--lines", help="lidar: number of beams"),
    gray: Optional[Path] = typer.Option(
        None, "--gray", help="keypoint: grayscale image, PFM or 8/16-bit PNG"
    ),
    intrinsics: Optional[str] = typer.Option(
        None, "--intrinsics", help="lidar: FX,FY,CX,CY in pixels"
    ),
    noise_sigma: Optional[float] = typer.Option(
        None, "--noise-sigma", help="Multiplicative Gaussian noise std, fraction [default: 0.0]"
    ),
    seed: Optional[int] = typer.Option(None, "--seed", help="Generator seed [default: 0]"),
    config: Optional[Path] = typer.Option(None, "--config", help="key=value file of flag values"),
):
    """Draw sparse anchors from ground truth and echo the resolved protocol as JSON."""
    k = _parse_intrinsics(intrinsics)
    with _guard():
        opts = _Options(config, SAMPLE_KEYS)
        seed_value = opts.get(seed, "seed", 0, int)
        sigma = opts.get(noise_sigma, "noise_sigma", 0.0)
        if preset is not None:
            if pattern is not None:
                raise typer.BadParameter("give either --pattern or --preset, not both")
            spec = preset_spec(preset, seed=seed_value, noise_sigma=sigma)
        else:
            chosen = opts.get(pattern, "pattern", None, str)
            if chosen is None:
                raise typer.BadParameter("one of --pattern or --preset is required")
            spec = SampleSpec(
                pattern=chosen,
                density=opts.get(density, "density", None) if chosen == "random" else None,
                count=opts.get(count, "count", None, int) if chosen == "keypoint" else None,
                lines=opts.get(lines, "lines", None, int) if chosen == "lidar" else None,
                noise_sigma=sigma,
                seed=seed_value,
            )
        if spec.pattern == "keypoint" and gray is None:
            raise typer.BadParameter("keypoint sampling needs --gray")
        if spec.pattern == "lidar" and k is None:
            raise typer.BadParameter("lidar sampling needs --intrinsics")

        truth = _read_depth(gt)
        image = read_gray(gray) if spec.pattern == "keypoint" and gray is not None else None
        s = draw_samples(spec, truth, image, k)
        write_sparse_csv(out, s)

    for message in s.warnings:
        console.print("[yellow]Warning:[/yellow]", escape(message))
    typer.echo(json.dumps(spec.model_dump()))


@app.command(name="eval")
def evaluate(
    pred: Path = typer.Option(..., "--pred", help="Predicted depth, PFM or millimeter PNG"),
    gt: Path = typer.Option(..., "--gt", help="Ground-truth depth, PFM or millimeter PNG (meters)"),
    report: Path = typer.Option(..., "--report", help="JSON report path"),
    pred_relative: bool = typer.Option(
        False, "--pred-relative", help="Prediction is relative; recover metric depth from --sparse"
    ),
    sparse: Optional[Path] = typer.Option(
        None, "--sparse", help="Sparse anchors CSV used with --pred-relative"
    ),
    intrinsics: Optional[str] = typer.Option(
        None, "--intrinsics", help="FX,FY,CX,CY in pixels, for point metrics"
    ),
    point: bool = typer.Option(False, "--point", help="Also report point-wise metrics"),
    affine_invariant: bool = typer.Option(
        False, "--affine-invariant", help="Also report point metrics after affine alignment"
    ),
):
    """Evaluate a depth prediction against ground truth."""
    if pred_relative and sparse is None:
        raise typer.BadParameter("--pred-relative needs --sparse")
    k = _parse_intrinsics(intrinsics)
    if (point or affine_invariant) and k is None:
        raise typer.BadParameter("point metrics need --intrinsics")

    with _guard():
        truth = _read_depth(gt)
        if pred_relative:
            relative = read_pfm(pred, unit="relative")
            validate_raster(relative)
            prediction = recover_metric(relative, read_sparse_csv(sparse, relative.shape))
        else:
            prediction = _read_depth(pred)

        metrics = depth_metrics(prediction, truth)
        pm = None
        affine_pm = None
        if k is not None and (point or affine_invariant):
            pred_points = backproject(prediction, k)
            gt_points = backproject(truth, k)
            if point:
                pm = point_metrics(pred_points, gt_points)
            if affine_invariant:
                affine_pm = affine_invariant_point_metrics(pred_points, gt_points)

        write_report(
            report,
            RunReport(
                inputs={
                    **_shape_inputs(pred=pred, gt=gt, sparse=sparse),
                    "height": truth.height,
                    "width": truth.width,
                },
                depth_metrics=metrics,
                point_metrics=pm,
                affine_point_metrics=affine_pm,
                config={
                    "pred_relative": pred_relative,
                    "intrinsics": k.as_string() if k is not None else None,
                },
            ),
        )

    table = Table(title="Depth Metrics")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")
    for name in ("rmse", "mae", "rel", "delta1", "count"):
        table.add_row(name, f"{getattr(metrics, name):.6g}")
    console.print(table)


@app.command()
def ablate(
    gt: Path = typer.Option(..., "--gt", help="Ground-truth depth, PFM or millimeter PNG (meters)"),
    relative: Path = typer.Option(..., "--relative", help="Relative depth PFM"),
    report: Path = typer.Option(..., "--report", help="JSON report path"),
    patterns: str = typer.Option(
        "random:0.03",
        "--patterns",
        help="Comma-separated tokens: random:DENSITY, keypoint:COUNT, lidar:LINES, "
        "optional ~SIGMA noise suffix, or preset names",
    ),
    seeds: str = typer.Option("0", "--seeds", help="Comma-separated seeds"),
    gray: Optional[Path] = typer.Option(None, "--gray", help="Grayscale image for keypoints"),
    intrinsics: Optional[str] = typer.Option(
        None, "--intrinsics", help="FX,FY,CX,CY in pixels, for lidar patterns"
    ),
    lam: Optional[float] = typer.Option(None, "--lambda", help="Data-term weight [default: 1.0]"),
    cg_tol: Optional[float] = typer.Option(None, "--cg-tol", help="CG tolerance [default: 1e-8]"),
    cg_max_iter: Optional[int] = typer.Option(
        None, "--cg-max-iter", help="CG iteration cap [default: size-dependent, at most 20000]"
    ),
    eps_pos: Optional[float] = typer.Option(
        None, "--eps-pos", help="Positivity floor, relative units [default: 1e-6]"
    ),
    bandwidth: Optional[float] = typer.Option(
        None, "--bandwidth", help="LWLR kernel std in pixels [default: max(H,W)/8]"
    ),
    ridge: Optional[float] = typer.Option(None, "--ridge", help="LWLR ridge [default: 0.001]"),
    config: Optional[Path] = typer.Option(None, "--config", help="key=value file of flag values"),
):
    """Run every alignment method over patterns and seeds and rank them by REL."""
    k = _parse_intrinsics(intrinsics)
    with _guard():
        opts = _Options(config, SOLVER_KEYS | LWLR_KEYS)
        tokens = [t.strip() for t in patterns.split(",") if t.strip()]
        seed_list = [int(v) for v in seeds.split(",") if v.strip()]
        specs = [parse_pattern_token(token) for token in tokens]
        if any(spec.pattern == "keypoint" for spec in specs) and gray is None:
            raise typer.BadParameter("keypoint patterns need --gray")
        if any(spec.pattern == "lidar" for spec in specs) and k is None:
            raise typer.BadParameter("lidar patterns need --intrinsics")

        solver = _solver_config(opts, lam, cg_tol, cg_max_iter, eps_pos)
        lwlr = _lwlr_config(opts, bandwidth, ridge)
        truth = _read_depth(gt)
        d_r = read_pfm(relative, unit="relative")
        validate_raster(d_r)
        image = read_gray(gray) if gray is not None else None

        runner = AblationRunner(truth, d_r, image, k, solver, lwlr)
        summary = runner.run(tokens, seed_list)
        write_report(
            report,
            RunReport(
                inputs={
                    **_shape_inputs(gt=gt, relative=relative, gray=gray),
                    "height": truth.height,
                    "width": truth.width,
                },
                config={**_solver_echo(solver, d_r.shape), **_lwlr_echo(lwlr, d_r.shape)},
                ablation=summary,
            ),
        )

    table = Table(title="Mean Rank by REL")
    table.add_column("Method", style="cyan")
    table.add_column("Mean rank", style="green")
    for arm, rank in summary.ranking.mean_ranks.items():
        table.add_row(arm, f"{rank:.3f}")
    console.print(table)
    typer.echo(json.dumps(summary.ranking.mean_ranks))


@app.command()
def losses(
    pred_points: Path = typer.Option(..., "--pred-points", help="PREFIX of predicted points"),
    gt_points: Path = typer.Option(..., "--gt-points", help="PREFIX of the ground-truth point map"),
    lambda_local: Optional[float] = typer.Option(
        None, "--lambda-local", help="Weight of the local term [default: 1.0]"
    ),
    lambda_normal: Optional[float] = typer.Option(
        None, "--lambda-normal", help="Weight of the normal term [default: 1.0]"
    ),
    anchors: Optional[int] = typer.Option(
        None, "--anchors", help="Sphere anchors sampled for the local term [default: 64]"
    ),
    radius_ratio: Optional[float] = typer.Option(
        None, "--radius-ratio", help="Sphere radius as a fraction of median ‖P̂‖ [default: 0.1]"
    ),
    seed: Optional[int] = typer.Option(None, "--seed", help="Anchor sampling seed [default: 0]"),
    raw_sum: bool = typer.Option(False, "--raw-sum", help="Sum terms instead of averaging"),
    config: Optional[Path] = typer.Option(None, "--config", help="key=value file of flag values"),
):
    """Print the global, local and normal loss terms and their total as JSON."""
    with _guard():
        opts = _Options(config, LOSS_KEYS)
        weights = LossWeights(
            lambda_local=opts.get(lambda_local, "lambda_local", 1.0),
            lambda_normal=opts.get(lambda_normal, "lambda_normal", 1.0),
            anchor_count=opts.get(anchors, "anchors", 64, int),
            radius_ratio=opts.get(radius_ratio, "radius_ratio", 0.1),
        )
        breakdown = compute_losses(
            read_point_map(pred_points),
            read_point_map(gt_points),
            weights,
            seed=opts.get(seed, "seed", 0, int),
            raw_sum=raw_sum,
        )
    typer.echo(json.dumps(breakdown.model_dump(by_alias=True)))


if __name__ == "__main__":
    app()
