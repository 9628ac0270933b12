"""
Exception hierarchy shared by every kmtlab package.

Divergent moments and divergent series are values (+inf), not errors; the
classes below cover inputs a computation cannot accept at all.
"""

from typing import Optional


class KmtLabError(Exception):
    """Base class for kmtlab errors"""


class InvalidSpecError(KmtLabError, ValueError):
    """Malformed distribution spec, config or input file"""


class InfeasibleParameterError(KmtLabError, ValueError):
    """Numeric inputs violate an operation's precondition"""


class UnsupportedStrategyError(KmtLabError, ValueError):
    """A coupling strategy cannot handle the requested family"""

    def __init__(self, strategy: str, family: str):
        super().__init__(f"strategy '{strategy}' does not support family '{family}'")
        self.strategy = strategy
        self.family = family


class QuadratureError(KmtLabError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance"""

    def __init__(self, message: str, error_estimate: Optional[float] = None):
        if error_estimate is not None:
            message = f"{message} (achieved error estimate {error_estimate:.3e})"
        super().__init__(message)
        self.error_estimate = error_estimate


class VacuousConstantError(InfeasibleParameterError):
    """A closed-form constant exists only on an empty parameter range"""


class HorizonExhaustedError(InfeasibleParameterError):
    """Finite-horizon construction ran out of indices"""

    def __init__(self, step: int, horizon: int):
        super().__init__(f"horizon exhausted at k={step} (horizon={horizon})")
        self.step = step
        self.horizon = horizon
