"""
shared/harness/sweep_tracker.py

Logs the lifecycle of a sweep. Use as an async context manager so failed
sweeps are always reported.

Usage:
    async with SweepTracker("fig4a", workers=4) as run:
        run.points_total = len(points)
        rows = await evaluate(...)
        run.rows_written = len(rows)
"""
import logging
import time
from datetime import datetime, timezone

logger = logging.getLogger(__name__)


class SweepTracker:
    def __init__(self, preset: str, workers: int = 1):
        self.preset = preset
        self.workers = workers

        self.points_total: int = 0
        self.rows_written: int = 0
        self.points_failed: int = 0
        self.status: str = "running"
        self.duration: float = 0.0

        self._started_at = datetime.now(timezone.utc)
        self._clock = time.perf_counter()

    async def __aenter__(self):
        logger.info(
            f"Sweep started: {self.preset} [workers={self.workers}, "
            f"at={self._started_at.isoformat(timespec='seconds')}]"
        )
        return self

    async def __aexit__(self, exc_type, exc_val, exc_tb):
        self.status = "success" if exc_type is None else "failed"
        self.duration = time.perf_counter() - self._clock

        log = logger.info if exc_type is None else logger.error
        log(
            f"Sweep {self.status}: {self.preset} "
            f"[points={self.points_total}, rows={self.rows_written}, "
            f"failed={self.points_failed}, duration={self.duration:.1f}s]"
            + (f" — {exc_val}" if exc_val else "")
        )
        return False  # don't suppress exceptions

    def log_error(self, point: tuple, error: Exception):
        """Record one grid point failure; the sweep still fails as a whole."""
        self.points_failed += 1
        logger.warning(f"{self.preset} point {point} failed: {error}")
