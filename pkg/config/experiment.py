"""
ExperimentConfig: the full parameter set of one CLI invocation
"""

import logging
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from config.settings import get_settings
from utils.exceptions import InvalidSpecError

logger = logging.getLogger(__name__)

COMMANDS = ("regularity", "bound", "couple", "verify", "family")


class OutputTarget(BaseModel):
    """Where a report goes; path None means stdout"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    path: Optional[str] = None
    format: Literal["json", "csv"] = "json"


class ExperimentConfig(BaseModel):
    """
    Command name, its parameters, output target, seed and worker count

    Serializes with model_dump_json() and reads back with from_json()
    without loss; reports echo it so a run can be replayed.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Literal["regularity", "bound", "couple", "verify", "family"]
    parameters: Dict[str, Any] = Field(default_factory=dict)
    output: OutputTarget = Field(default_factory=OutputTarget)
    seed: int = Field(default_factory=lambda: get_settings().KMTLAB_SEED, ge=0, lt=2**64)
    workers: int = Field(default_factory=lambda: get_settings().WORKERS, ge=1)

    @classmethod
    def build(cls, command: str, parameters: Dict[str, Any], output: Optional[str] = None,
              fmt: str = "json", seed: Optional[int] = None, workers: Optional[int] = None) -> "ExperimentConfig":
        """
        Validated config from CLI values; None falls back to the settings

        Raises:
            InvalidSpecError: when a value does not validate
        """
        payload: Dict[str, Any] = {
            "command": command,
            "parameters": parameters,
            "output": {"path": output, "format": fmt},
        }
        if seed is not None:
            payload["seed"] = seed
        if workers is not None:
            payload["workers"] = workers
        try:
            return cls.model_validate(payload)
        except ValidationError as e:
            raise InvalidSpecError(f"invalid experiment configuration: {e}") from e

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            return cls.model_validate_json(text)
        except ValidationError as e:
            raise InvalidSpecError(f"invalid experiment configuration: {e}") from e

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        file = Path(path)
        if not file.exists():
            raise InvalidSpecError(f"config file not found: {file}")
        return cls.from_json(file.read_text(encoding="utf-8"))

    def echo(self) -> Dict[str, Any]:
        """JSON-ready form embedded in reports, without the worker count"""
        return self.model_dump(mode="json", exclude={"workers"})
