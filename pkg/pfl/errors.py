"""
Exception hierarchy for the PFL risk-assessment toolkit.

Library code raises these; the pipeline and the CLI turn them into a single
readable message and the usage/input-error exit code.
"""

from __future__ import annotations

from typing import Optional


class PFLError(ValueError):
    """Base class for every input or model error raised by the toolkit."""


class ConfigError(PFLError):
    """Malformed environment configuration."""


class RobotParseError(PFLError):
    """Robot description could not be parsed or failed validation.

    Syntax errors carry ``line``/``column``; semantic errors carry the
    offending ``field`` path, e.g. ``links[0].mass_kg``.
    """

    def __init__(
        self,
        message: str,
        *,
        field: Optional[str] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ) -> None:
        self.field = field
        self.line = line
        self.column = column
        if field is not None:
            message = f"{field}: {message}"
        elif line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class DynamicsError(PFLError):
    """DOF mismatch, unknown link or a mass matrix that is not positive definite."""


class ContactModelError(PFLError):
    """Invalid input to the contact-force model."""


class ScenarioError(PFLError):
    """Contact scenario is incomplete or inconsistent with the interpretation."""


class UnsupportedInjuryMeasureError(ScenarioError):
    """Injury measure other than force/pressure requested."""


class TraceParseError(PFLError):
    """Force trace CSV is malformed; ``row`` is the 1-based data row."""

    def __init__(self, message: str, *, row: Optional[int] = None) -> None:
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class ImpactConfigError(PFLError):
    """Simulator configuration violates its invariants."""


class MapError(PFLError):
    """Invalid collision-force-map request or document."""


class CostError(PFLError):
    """Invalid experimental-cost parameters."""


__all__ = [
    "PFLError",
    "ConfigError",
    "RobotParseError",
    "DynamicsError",
    "ContactModelError",
    "ScenarioError",
    "UnsupportedInjuryMeasureError",
    "TraceParseError",
    "ImpactConfigError",
    "MapError",
    "CostError",
]
