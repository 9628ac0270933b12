"""
Configuration for kmtlab
"""

from .settings import settings, get_settings, reset_settings
from .experiment import ExperimentConfig, OutputTarget

__all__ = ["settings", "get_settings", "reset_settings", "ExperimentConfig", "OutputTarget"]
