"""Run-time settings.

Settings come from, in increasing precedence: built-in defaults, ``ACGB_*``
environment variables (a ``.env`` file is loaded first), ``option`` lines of a
problem file, and command-line flags.
"""

import os
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

ENV_PREFIX = "ACGB_"


class Settings(BaseModel):
    """Caps and switches shared by the algorithms and the driver."""

    term_cap: int = Field(200_000, ge=1, description="Maximum terms of a polynomial under reduction")
    basis_cap: int = Field(2_000, ge=1, description="Maximum size of a basis under completion")
    max_degree: int = Field(6, ge=1, description="Degree bound for free-algebra completion")
    u_set_degree_cap: int = Field(8, ge=0, description="Witness enumeration bound for infinite U-sets")
    seed: int = Field(0, description="Seed for the random change of Lie basis")
    verify: bool = Field(True, description="Run the diamond-lemma and membership checks")
    random_basis_change: bool = Field(
        False, description="Retry once after a random change of Lie basis on an infinite U-set"
    )
    workers: int = Field(1, ge=1, description="Threads used for independent verification checks")
    log_level: str = Field("WARNING", description="Logging level")

    model_config = {"frozen": True}

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        value = value.upper()
        if value not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value!r}")
        return value

    @classmethod
    def from_env(cls, env_file: Optional[str] = None) -> "Settings":
        """Build settings from defaults and ``ACGB_*`` environment variables."""
        load_dotenv(env_file)
        values: Dict[str, Any] = {}
        for name in cls.model_fields:
            raw = os.getenv(ENV_PREFIX + name.upper())
            if raw is not None and raw != "":
                values[name] = raw
        return cls(**values)

    def merged(self, **overrides: Any) -> "Settings":
        """Return a copy with every non-None override applied."""
        updates = {k: v for k, v in overrides.items() if v is not None}
        if not updates:
            return self
        return self.model_validate({**self.model_dump(), **updates})
