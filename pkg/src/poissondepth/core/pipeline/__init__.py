"""Method dispatch and the ablation runner."""

from poissondepth.core.pipeline.ablation import (
    ABLATION_ARMS,
    AblationCell,
    AblationRunner,
    AblationSummary,
)
from poissondepth.core.pipeline.completion import CompletionMethod, CompletionResult, complete

__all__ = [
    "ABLATION_ARMS",
    "AblationCell",
    "AblationRunner",
    "AblationSummary",
    "CompletionMethod",
    "CompletionResult",
    "complete",
]
