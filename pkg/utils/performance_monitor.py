"""
Run monitoring for kmtlab commands
Tracks wall time and resident memory of each command with psutil
"""

import time
import logging
import threading
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, Optional

import psutil

logger = logging.getLogger(__name__)


@dataclass
class RunMetrics:
    """Metrics for a single command execution"""
    command: str
    start_time: datetime
    end_time: Optional[datetime] = None
    duration_seconds: Optional[float] = None
    peak_memory_mb: float = 0.0
    success: bool = True
    error_message: Optional[str] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization"""
        return {
            "command": self.command,
            "start_time": self.start_time.isoformat(),
            "end_time": self.end_time.isoformat() if self.end_time else None,
            "duration_seconds": self.duration_seconds,
            "peak_memory_mb": self.peak_memory_mb,
            "success": self.success,
            "error_message": self.error_message,
            "details": self.details,
        }


class PerformanceMonitor:
    """Collects RunMetrics for the commands of one process"""

    def __init__(self, max_runs: int = 1000):
        self.runs: deque = deque(maxlen=max_runs)
        self.active_runs: Dict[str, RunMetrics] = {}
        self._lock = threading.Lock()
        self._start_clock: Dict[str, float] = {}

    @staticmethod
    def current_memory_mb() -> float:
        """Resident set size of this process in MB"""
        return psutil.Process().memory_info().rss / 1024 / 1024

    def start_run(self, command: str) -> RunMetrics:
        """
        Start tracking a command

        Args:
            command: Command name

        Returns:
            RunMetrics object for this command
        """
        with self._lock:
            metrics = RunMetrics(command=command, start_time=datetime.now(),
                                 peak_memory_mb=self.current_memory_mb())
            self.active_runs[command] = metrics
            self._start_clock[command] = time.perf_counter()
            return metrics

    def end_run(self, command: str, success: bool = True, error_message: str = None) -> Optional[RunMetrics]:
        """
        End tracking for a command

        Args:
            command: Command name
            success: Whether the command succeeded
            error_message: Error message if failed

        Returns:
            Completed RunMetrics object
        """
        with self._lock:
            if command not in self.active_runs:
                return None
            metrics = self.active_runs.pop(command)
            metrics.end_time = datetime.now()
            metrics.duration_seconds = time.perf_counter() - self._start_clock.pop(command)
            metrics.peak_memory_mb = max(metrics.peak_memory_mb, self.current_memory_mb())
            metrics.success = success
            metrics.error_message = error_message
            self.runs.append(metrics)
            return metrics

    def summary(self) -> Dict[str, Any]:
        """Aggregate statistics over finished runs"""
        with self._lock:
            durations = [r.duration_seconds for r in self.runs if r.duration_seconds is not None]
            return {
                "total_runs": len(self.runs),
                "failed_runs": sum(1 for r in self.runs if not r.success),
                "total_seconds": sum(durations),
                "max_memory_mb": max((r.peak_memory_mb for r in self.runs), default=0.0),
            }


performance_tracker = PerformanceMonitor()


class RunTracker:
    """Context manager that tracks one command and logs its cost on exit"""

    def __init__(self, command: str, monitor: PerformanceMonitor = None):
        self.command = command
        self.monitor = monitor or performance_tracker
        self.metrics = None

    def __enter__(self) -> RunMetrics:
        self.metrics = self.monitor.start_run(self.command)
        return self.metrics

    def __exit__(self, exc_type, exc_val, exc_tb):
        success = exc_type is None
        error_message = str(exc_val) if exc_val else None
        metrics = self.monitor.end_run(self.command, success, error_message)
        if metrics is not None:
            marker = "📊" if success else "❌"
            logger.info(f"{marker} {self.command}: {metrics.duration_seconds:.3f}s, "
                        f"{metrics.peak_memory_mb:.1f} MB")
        return False
