"""JSON run reports with a fixed key order and 17-significant-digit floats."""

import json
import math
from pathlib import Path
from typing import Any, Optional, Union

import structlog
from pydantic import BaseModel, Field

from poissondepth.core.config import SampleSpec
from poissondepth.core.errors import FormatError
from poissondepth.core.io.schema_loader import validate_document
from poissondepth.core.metrics import DepthMetrics, PointMetrics
from poissondepth.core.pipeline import AblationSummary
from poissondepth.core.poisson import SolveStats

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]

REPORT_FORMAT = 1


class RunReport(BaseModel):
    """Everything one CLI run produced; field order is the key order on disk."""

    inputs: dict[str, Any] = Field(default_factory=dict, description="Input paths and dims")
    spec: Optional[SampleSpec] = None
    solver: Optional[SolveStats] = None
    depth_metrics: Optional[DepthMetrics] = None
    point_metrics: Optional[PointMetrics] = None
    affine_point_metrics: Optional[PointMetrics] = None
    config: dict[str, Any] = Field(default_factory=dict, description="Resolved parameters")
    ablation: Optional[AblationSummary] = None
    versions: dict[str, int] = Field(default_factory=lambda: {"format": REPORT_FORMAT})


def format_float(value: float) -> str:
    """17 significant digits; non-finite values become null."""
    if not math.isfinite(value):
        return "null"
    text = format(value, ".17g")
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def emit_json(value: Any, indent: int = 2, _level: int = 0) -> str:
    """Serialize JSON-compatible data keeping mapping order."""
    pad = " " * (indent * (_level + 1))
    closing = " " * (indent * _level)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {emit_json(v, indent, _level + 1)}"
            for k, v in value.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + closing + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{pad}{emit_json(v, indent, _level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + closing + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def render_report(report: RunReport, timing: bool = False) -> str:
    """Report text; ``solver.wall_time`` is left out unless timing is requested."""
    document = report.model_dump()
    if not timing and document["solver"] is not None:
        document["solver"].pop("wall_time", None)
    text = emit_json(document) + "\n"
    ok, errors = validate_document(json.loads(text))
    if not ok:
        raise ValueError(f"report does not match schema: {'; '.join(errors or [])}")
    return text


def write_report(path: PathLike, report: RunReport, timing: bool = False) -> None:
    text = render_report(report, timing)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info("Report written", path=str(path))


def read_report(path: PathLike) -> RunReport:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except json.JSONDecodeError as e:
        raise FormatError(path, f"invalid JSON: {e.msg}", line=e.lineno) from e
    ok, errors = validate_document(document)
    if not ok:
        raise FormatError(path, f"report does not match schema: {'; '.join(errors or [])}")
    return RunReport.model_validate(document)
