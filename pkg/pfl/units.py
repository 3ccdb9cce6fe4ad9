"""
Unit conversions, the explicit "infinite mass" marker and number formatting.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Union


class Infinite(Enum):
    """Unbounded mass: a constrained body part or a singular impact direction."""

    MASS = "infinite"

    def __str__(self) -> str:
        return self.value


INFINITE = Infinite.MASS

Mass = Union[float, Infinite]

SIGNIFICANT_DIGITS = 6


def n_per_mm_to_n_per_m(stiffness_n_per_mm: float) -> float:
    return stiffness_n_per_mm * 1000.0


def n_per_m_to_n_per_mm(stiffness_n_per_m: float) -> float:
    return stiffness_n_per_m / 1000.0


def is_infinite(mass: Mass) -> bool:
    return mass is INFINITE


def format_sig(value: float, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Canonical fixed-precision rendering used by every text and CSV output."""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = format(value, f".{digits}g")
    return "0" if text in ("-0", "0") else text


__all__ = [
    "Infinite",
    "INFINITE",
    "Mass",
    "SIGNIFICANT_DIGITS",
    "n_per_mm_to_n_per_m",
    "n_per_m_to_n_per_mm",
    "is_infinite",
    "format_sig",
]
