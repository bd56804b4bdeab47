"""Configuration helpers: environment variables (optionally from .env) and defaults."""

from __future__ import annotations

import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field
from pydantic import ValidationError as PydanticValidationError

from src.utils.errors import InvalidParameterError


def get_env(key: str, default: Optional[str] = None) -> Optional[str]:
    return os.environ.get(key, default)


def _int_env(key: str, default: int) -> int:
    raw = get_env(key)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        raise InvalidParameterError(
            f"{key} must be an integer",
            details={"parameter": key, "value": raw, "constraint": "integer"},
        ) from None


class Settings(BaseModel):
    """Runtime settings read from MP2S_* environment variables."""

    log_level: str = Field("INFO", description="Level for the 'src' logger")
    log_file: Optional[str] = Field(None, description="Rotating log file name under logs/")
    exhaustive_limit: int = Field(20, ge=1, description="Largest n for exhaustive index-set enumeration")
    default_seed: int = Field(0, ge=0, description="Seed when a sample spec omits one")
    progress: bool = Field(False, description="Show tqdm progress bars during sweeps")

    @classmethod
    def from_env(cls, dotenv: bool = True) -> "Settings":
        """Read MP2S_* variables.

        Raises:
            InvalidParameterError: If a variable does not parse or is out of range
        """
        if dotenv:
            load_dotenv(override=False)
        values = {
            "log_level": get_env("MP2S_LOG_LEVEL", "INFO"),
            "log_file": get_env("MP2S_LOG_FILE") or None,
            "exhaustive_limit": _int_env("MP2S_EXHAUSTIVE_LIMIT", 20),
            "default_seed": _int_env("MP2S_DEFAULT_SEED", 0),
            "progress": get_env("MP2S_PROGRESS", "false").lower() in ("1", "true", "yes"),
        }
        try:
            return cls(**values)
        except PydanticValidationError as e:
            fields = [".".join(str(p) for p in err["loc"]) for err in e.errors()]
            raise InvalidParameterError(
                "invalid MP2S_* setting",
                details={"fields": ",".join(fields), "constraint": "; ".join(err["msg"] for err in e.errors())},
            ) from None
