"""
Settings singleton

Values come from the environment (optionally a .env file in the working
directory). Attribute names are UPPERCASE, e.g. ``settings.KMTLAB_SEED``.
"""

import os
import logging
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from utils.exceptions import InvalidSpecError

load_dotenv()

logger = logging.getLogger(__name__)


class Settings(BaseModel):
    """Runtime defaults for every command"""

    KMTLAB_SEED: int = Field(default=20240101, ge=0, lt=2**64)
    QUAD_ABS_TOL: float = Field(default=1e-12, gt=0)
    BERNSTEIN_Q_MAX: int = Field(default=200, ge=3)
    SAKHANENKO_TOL: float = Field(default=1e-12, gt=0)
    WORKERS: int = Field(default=1, ge=1)
    OUTPUT_DIR: str = "data/output"
    LOG_LEVEL: str = "INFO"

    # c, C_S(q), C(q), C_q, C_R(q) have no published numeric value
    DEFAULT_CONSTANT: float = Field(default=1.0, gt=0)

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Builds settings from environment variables

        Returns:
            Settings instance

        Raises:
            InvalidSpecError: when an environment value does not validate
        """
        raw = {}
        for name in cls.model_fields:
            value = os.getenv(name)
            if value is not None and value != "":
                raw[name] = value
        try:
            return cls.model_validate(raw)
        except ValidationError as e:
            raise InvalidSpecError(f"invalid environment configuration: {e}") from e


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Returns the settings singleton, building it on first use"""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
        logger.debug(f"settings loaded: {_settings.model_dump()}")
    return _settings


def reset_settings() -> Settings:
    """Rebuilds the singleton from the current environment"""
    global _settings, settings
    _settings = None
    settings = get_settings()
    return settings


settings = get_settings()
