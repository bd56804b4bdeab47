"""
Timing for simulation sweeps.

Durations are seconds (float) everywhere; only ``format_duration`` picks a unit.
"""

import logging
import time
from typing import Optional

logger = logging.getLogger(__name__)

_UNITS = ((1.0, "s"), (1e-3, "ms"), (1e-6, "μs"))


def format_duration(seconds: float) -> str:
    """Render seconds with the largest unit that keeps the value >= 1 ("1.50s", "2.00ms")."""
    for scale, unit in _UNITS:
        if seconds >= scale:
            return f"{seconds / scale:.2f}{unit}"
    return f"{seconds * 1e9:.2f}ns"


class SweepTimer:
    """Context manager timing a sweep of automaton runs.

    Call ``tick()`` per finished run. On exit one line is logged:
    ``name | OK/FAILED | duration | runs=N | R runs/s``.

    Example:
        with SweepTimer("oracle sweep") as timer:
            for s, t in pairs:
                run(automaton, s, t)
                timer.tick()
    """

    def __init__(self, name: str = "sweep", log_level: str = "info", auto_log: bool = True):
        self.name = name
        self.log_level = log_level
        self.auto_log = auto_log
        self.runs = 0
        self.start_time: Optional[float] = None
        self.duration: Optional[float] = None

    def __enter__(self) -> "SweepTimer":
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.duration = time.perf_counter() - self.start_time
        if self.auto_log:
            status = "FAILED" if exc_type else "OK"
            getattr(logger, self.log_level.lower(), logger.info)(
                f"{self.name} | {status} | {format_duration(self.duration)} "
                f"| runs={self.runs} | {self.throughput():.1f} runs/s"
            )

    def tick(self, count: int = 1) -> None:
        self.runs += count

    def elapsed(self) -> float:
        """Seconds so far; the final duration once the block has exited."""
        if self.start_time is None:
            return 0.0
        if self.duration is not None:
            return self.duration
        return time.perf_counter() - self.start_time

    def throughput(self) -> float:
        elapsed = self.elapsed()
        return self.runs / elapsed if elapsed > 0 else 0.0
