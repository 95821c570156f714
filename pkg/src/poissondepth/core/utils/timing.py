"""Wall-clock bookkeeping for solver and ablation stages."""

import time
from collections import Counter
from contextlib import contextmanager
from typing import Dict, Iterator, Mapping


class TimingContext:
    """Seconds per named stage, summed over every time the stage ran.

    Instances are not shared between threads; per-cell contexts are folded into a
    parent one with :meth:`merge`.
    """

    def __init__(self):
        self.timings: Dict[str, float] = {}
        self.counts: Counter[str] = Counter()
        self._open: Dict[str, float] = {}

    def start(self, stage: str) -> None:
        self._open[stage] = time.perf_counter()

    def stop(self, stage: str) -> float:
        """Close ``stage`` and return the seconds of this run (0.0 if it was never opened)."""
        opened = self._open.pop(stage, None)
        if opened is None:
            return 0.0
        elapsed = time.perf_counter() - opened
        self._add(stage, elapsed, 1)
        return elapsed

    @contextmanager
    def stage(self, stage_name: str) -> Iterator[None]:
        self.start(stage_name)
        try:
            yield
        finally:
            self.stop(stage_name)

    def merge(self, timings: Mapping[str, float], counts: Mapping[str, int] | None = None) -> None:
        """Add another context's totals to this one."""
        for stage, seconds in timings.items():
            self._add(stage, seconds, (counts or {}).get(stage, 1))

    def _add(self, stage: str, seconds: float, runs: int) -> None:
        self.timings[stage] = self.timings.get(stage, 0.0) + seconds
        self.counts[stage] += runs

    def get_timings(self) -> Dict[str, float]:
        return dict(self.timings)
