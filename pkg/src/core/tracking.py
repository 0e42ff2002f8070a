"""
Resource tracking for builds and benchmark runs.

- NoOpTracker: wall-clock time only (default)
- ProfilingTracker: adds process CPU and resident memory (with --profile)
"""

import time
from abc import ABC, abstractmethod
from typing import Dict


class BaseTracker(ABC):
    """Abstract base class for resource tracking."""

    @abstractmethod
    def start(self) -> None:
        pass

    @abstractmethod
    def stop(self) -> Dict[str, float]:
        """Stop tracking and return measurements.

        Returns:
            Dict with keys: 'duration_seconds', 'cpu' (%), 'memory' (MB),
            'start_memory' (MB), 'tracking_enabled'
        """
        pass


class NoOpTracker(BaseTracker):
    """Measures elapsed time only; used unless profiling is requested."""

    def __init__(self):
        self.start_time = None

    def start(self) -> None:
        self.start_time = time.perf_counter()

    def stop(self) -> Dict[str, float]:
        elapsed = time.perf_counter() - self.start_time if self.start_time else 0.0
        return {
            'duration_seconds': elapsed,
            'cpu': 0.0,
            'memory': 0.0,
            'start_memory': 0.0,
            'tracking_enabled': False,
        }


class ProfilingTracker(BaseTracker):
    """Samples the current process through psutil at start and stop."""

    def __init__(self):
        self.start_time = None
        self.start_memory = 0.0
        try:
            import psutil
            self.process = psutil.Process()
            self.enabled = True
        except ImportError:
            self.process = None
            self.enabled = False

    def _rss_mb(self) -> float:
        if not self.enabled:
            return 0.0
        return self.process.memory_info().rss / 1024 / 1024

    def start(self) -> None:
        self.start_time = time.perf_counter()
        if self.enabled:
            # first call primes the counter; psutil reports 0.0 for it
            self.process.cpu_percent()
        self.start_memory = self._rss_mb()

    def stop(self) -> Dict[str, float]:
        elapsed = time.perf_counter() - self.start_time if self.start_time else 0.0
        memory = self._rss_mb()
        return {
            'duration_seconds': elapsed,
            'cpu': self.process.cpu_percent() if self.enabled else 0.0,
            'memory': memory,
            'start_memory': self.start_memory,
            'tracking_enabled': self.enabled,
        }


def create_tracker(enable_profiling: bool = False) -> BaseTracker:
    if enable_profiling:
        return ProfilingTracker()
    return NoOpTracker()
