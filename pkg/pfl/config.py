"""
Runtime configuration loaded from the environment (and an optional ``.env``).

Supported variables:
  PFL_BODY_PARTS          extra body-part data file merged over the built-ins
  PFL_QUASISTATIC_FACTOR  quasi-static limit as a fraction of the transient limit
  PFL_PHASE_BOUNDARY_S    default Phase I / Phase II boundary for traces [s]
  PFL_CONTACT_END_N       force below which contact counts as ended [N]
  PFL_LOG_LEVEL           logging level used by the CLI
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from .errors import ConfigError


load_dotenv()

DEFAULT_QUASISTATIC_FACTOR = 0.5
DEFAULT_PHASE_BOUNDARY_S = 0.5
DEFAULT_CONTACT_END_N = 5.0


@dataclass(frozen=True)
class Settings:
    body_parts_path: Optional[str] = None
    quasistatic_factor: float = DEFAULT_QUASISTATIC_FACTOR
    phase_boundary_s: float = DEFAULT_PHASE_BOUNDARY_S
    contact_end_n: float = DEFAULT_CONTACT_END_N
    log_level: str = "WARNING"


def _float_env(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {raw!r}") from None
    if value <= 0:
        raise ConfigError(f"{name} must be positive, got {raw!r}")
    return value


def get_settings() -> Settings:
    """Read the current environment into a ``Settings`` value."""
    body_parts = os.getenv("PFL_BODY_PARTS") or None
    return Settings(
        body_parts_path=body_parts,
        quasistatic_factor=_float_env("PFL_QUASISTATIC_FACTOR", DEFAULT_QUASISTATIC_FACTOR),
        phase_boundary_s=_float_env("PFL_PHASE_BOUNDARY_S", DEFAULT_PHASE_BOUNDARY_S),
        contact_end_n=_float_env("PFL_CONTACT_END_N", DEFAULT_CONTACT_END_N),
        log_level=os.getenv("PFL_LOG_LEVEL", "WARNING").upper(),
    )


__all__ = [
    "Settings",
    "get_settings",
    "DEFAULT_QUASISTATIC_FACTOR",
    "DEFAULT_PHASE_BOUNDARY_S",
    "DEFAULT_CONTACT_END_N",
]
