"""
Time cost of validating a robot cell experimentally.

Each (position, body part) configuration needs a measurement setup, a series
of velocity adjustment trials and repeated confirmation measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional

from .errors import CostError


WORKING_DAY_H = 8.0


@dataclass(frozen=True)
class CostParams:
    setup_h: float = 0.5
    adjust_h: float = 0.05  # per trial
    repeat_h: float = 0.02  # per repeat
    repeats: int = 3
    trials: int = 6

    def __post_init__(self) -> None:
        for label in ("setup_h", "adjust_h", "repeat_h"):
            value = getattr(self, label)
            if not (value >= 0 and math.isfinite(value)):
                raise CostError(f"{label} must be >= 0, got {value}")
        if self.repeats < 1 or self.trials < 1:
            raise CostError("repeats and trials must be >= 1")


def cost_breakdown(params: CostParams) -> Dict[str, float]:
    return {
        "setup_h": params.setup_h,
        "adjustment_h": params.trials * params.adjust_h,
        "repetition_h": params.repeats * params.repeat_h,
    }


def cost_per_configuration(params: CostParams) -> float:
    """Hours for one position and body part: setup + trials*adjust + repeats*repeat."""
    return sum(cost_breakdown(params).values())


def cost_total(
    params: CostParams,
    positions: int,
    body_parts: int,
    per_configuration: Optional[float] = None,
) -> float:
    """
    Hours for validating every position with every body part, rounded to 2 decimals.

    ``per_configuration`` overrides the value derived from ``params``.
    """
    if positions < 1 or body_parts < 1:
        raise CostError("positions and body parts must be >= 1")
    per_config = cost_per_configuration(params) if per_configuration is None else per_configuration
    if not (per_config >= 0 and math.isfinite(per_config)):
        raise CostError(f"per-configuration cost must be >= 0, got {per_config}")
    return round(positions * body_parts * per_config, 2)


def working_days(hours: float, day_h: float = WORKING_DAY_H) -> float:
    if hours < 0 or day_h <= 0:
        raise CostError("hours must be >= 0 and the working day > 0")
    return hours / day_h


__all__ = [
    "CostParams",
    "WORKING_DAY_H",
    "cost_breakdown",
    "cost_per_configuration",
    "cost_total",
    "working_days",
]
