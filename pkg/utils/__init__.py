"""
Utility functions, error types and run monitoring
"""

from .helpers import *
from .exceptions import (
    KmtLabError,
    InvalidSpecError,
    InfeasibleParameterError,
    UnsupportedStrategyError,
    QuadratureError,
    VacuousConstantError,
    HorizonExhaustedError,
)
from .performance_monitor import PerformanceMonitor, RunTracker, performance_tracker
