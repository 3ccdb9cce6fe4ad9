"""
Transient contact-force model and body-part data.

    F_col = v_rel * sqrt(mu * k)          contact force
    mu    = (1/m_r + 1/m_h)^-1            two-body effective mass
    m_r   = M/2 + m_L                     simplified robot mass

Stiffness is N/mm in files and on the command line, N/m everywhere inside.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from .config import DEFAULT_QUASISTATIC_FACTOR, get_settings
from .dynamics import ContactFrame, reflected_mass
from .errors import ContactModelError
from .robot_model import JointConfiguration, RobotModel, load_mass, total_moving_mass
from .units import INFINITE, Mass, is_infinite, n_per_mm_to_n_per_m


logger = logging.getLogger(__name__)

# measured within +-10 N of the expected force counts as a correct approximation
DEVIATION_TOLERANCE_N = 10.0
DEVIATION_GROSS_N = 100.0


class RobotMassMode(str, Enum):
    ISO_SIMPLIFIED = "iso_simplified"
    REFLECTED = "reflected"


class HumanMassMode(str, Enum):
    TS_VALUE = "ts_value"
    INFINITE = "infinite"


@dataclass(frozen=True)
class EffectiveMassSpec:
    robot_mass_mode: RobotMassMode
    human_mass_mode: HumanMassMode


@dataclass(frozen=True)
class BodyPartParams:
    name: str
    effective_mass: float  # kg
    stiffness: float  # N/m
    transient_force_limit: float  # N
    quasistatic_force_limit: float  # N
    damping: float = 0.0  # N*s/m, simulator only

    def __post_init__(self) -> None:
        for label in ("effective_mass", "stiffness", "transient_force_limit", "quasistatic_force_limit"):
            value = getattr(self, label)
            if not (value > 0 and math.isfinite(value)):
                raise ContactModelError(f"body part {self.name!r}: {label} must be positive, got {value}")
        if self.transient_force_limit < self.quasistatic_force_limit:
            raise ContactModelError(
                f"body part {self.name!r}: transient limit {self.transient_force_limit} N is below "
                f"quasi-static limit {self.quasistatic_force_limit} N"
            )
        if self.damping < 0:
            raise ContactModelError(f"body part {self.name!r}: damping must be >= 0")

    def threshold(self, quasistatic: bool) -> float:
        return self.quasistatic_force_limit if quasistatic else self.transient_force_limit


class DeviationBand(str, Enum):
    CORRECT = "correct"
    OVER_10 = "over_10"
    OVER_100 = "over_100"
    UNDER_10 = "under_10"
    UNDER_100 = "under_100"

    @property
    def color(self) -> str:
        return _BAND_COLORS[self]


_BAND_COLORS = {
    DeviationBand.CORRECT: "green",
    DeviationBand.OVER_10: "babyblue",
    DeviationBand.OVER_100: "blue",
    DeviationBand.UNDER_10: "orange",
    DeviationBand.UNDER_100: "red",
}


def _non_negative(value: float, label: str) -> None:
    if value < 0 or math.isnan(value):
        raise ContactModelError(f"{label} must be >= 0, got {value}")


def _positive(value: float, label: str) -> None:
    if not value > 0:
        raise ContactModelError(f"{label} must be > 0, got {value}")


# ----- Force model -----


def iso_robot_mass(M: float, m_L: float) -> float:
    """Simplified robot mass: half the moving mass plus the load."""
    _positive(M, "total moving mass M")
    _non_negative(m_L, "load mass m_L")
    return M / 2.0 + m_L


def effective_mass(m_r: Mass, m_h: Mass) -> Mass:
    """Reduced mass of robot and body part; an infinite partner leaves the other mass."""
    if is_infinite(m_r) and is_infinite(m_h):
        return INFINITE
    if is_infinite(m_h):
        _positive(m_r, "robot mass")  # type: ignore[arg-type]
        return float(m_r)  # type: ignore[arg-type]
    if is_infinite(m_r):
        _positive(m_h, "human mass")  # type: ignore[arg-type]
        return float(m_h)  # type: ignore[arg-type]
    _positive(m_r, "robot mass")  # type: ignore[arg-type]
    _positive(m_h, "human mass")  # type: ignore[arg-type]
    return 1.0 / (1.0 / m_r + 1.0 / m_h)  # type: ignore[operator]


def contact_force(v_rel: float, mu: Mass, k: float) -> float:
    """Peak transient contact force for relative velocity ``v_rel``."""
    _non_negative(v_rel, "relative velocity")
    _non_negative(k, "stiffness")
    if is_infinite(mu):
        return math.inf if v_rel > 0 and k > 0 else 0.0
    _non_negative(mu, "effective mass")  # type: ignore[arg-type]
    return v_rel * math.sqrt(mu * k)  # type: ignore[operator]


def velocity_limit(F_max: float, mu: Mass, k: float) -> float:
    """Largest relative velocity whose modelled contact force stays at ``F_max``."""
    _positive(F_max, "force limit")
    _positive(k, "stiffness")
    if is_infinite(mu):
        return 0.0
    _positive(mu, "effective mass")  # type: ignore[arg-type]
    return F_max / math.sqrt(mu * k)  # type: ignore[operator]


def classify_force_deviation(measured: float, expected: float) -> DeviationBand:
    """
    Compare a measured force with the expected one.

    ``over_*`` means the model overestimates (measured below expected),
    ``under_*`` that it underestimates (measured above expected).
    """
    _non_negative(measured, "measured force")
    _non_negative(expected, "expected force")
    delta = measured - expected
    if abs(delta) <= DEVIATION_TOLERANCE_N:
        return DeviationBand.CORRECT
    if delta < 0:
        return DeviationBand.OVER_10 if -delta <= DEVIATION_GROSS_N else DeviationBand.OVER_100
    return DeviationBand.UNDER_10 if delta <= DEVIATION_GROSS_N else DeviationBand.UNDER_100


# ----- Interpretation mass binding -----


def robot_mass(
    model: RobotModel,
    mode: RobotMassMode,
    q: Optional[JointConfiguration | Sequence[float]] = None,
    contact: Optional[ContactFrame] = None,
) -> Mass:
    """Robot-side mass: the simplified ISO model or the reflected mass at ``contact``."""
    if mode is RobotMassMode.ISO_SIMPLIFIED:
        return iso_robot_mass(total_moving_mass(model), load_mass(model))
    if q is None or contact is None:
        raise ContactModelError("reflected robot mass needs a joint configuration and a contact frame")
    return reflected_mass(model, q, contact)


def effective_mass_for(
    model: RobotModel,
    part: BodyPartParams,
    spec: EffectiveMassSpec,
    q: Optional[JointConfiguration | Sequence[float]] = None,
    contact: Optional[ContactFrame] = None,
) -> Mass:
    m_r = robot_mass(model, spec.robot_mass_mode, q, contact)
    m_h: Mass = INFINITE if spec.human_mass_mode is HumanMassMode.INFINITE else part.effective_mass
    return effective_mass(m_r, m_h)


# ----- Body-part data -----


def builtin_body_parts(quasistatic_factor: float = DEFAULT_QUASISTATIC_FACTOR) -> List[BodyPartParams]:
    """Hand and back from the TS annex; quasi-static limits derived via ``quasistatic_factor``."""
    _positive(quasistatic_factor, "quasi-static factor")
    if quasistatic_factor > 1:
        raise ContactModelError("quasi-static factor must not exceed 1")
    return [
        BodyPartParams(
            name="hand",
            effective_mass=0.6,
            stiffness=n_per_mm_to_n_per_m(75.0),
            transient_force_limit=280.0,
            quasistatic_force_limit=280.0 * quasistatic_factor,
        ),
        BodyPartParams(
            name="back",
            effective_mass=40.0,
            stiffness=n_per_mm_to_n_per_m(35.0),
            transient_force_limit=420.0,
            quasistatic_force_limit=420.0 * quasistatic_factor,
        ),
    ]


_PART_KEYS = (
    "name",
    "effective_mass_kg",
    "stiffness_n_per_mm",
    "transient_force_limit_n",
    "quasistatic_force_limit_n",
    "damping_ns_per_m",
)


def _part_number(entry: Dict[str, Any], key: str, path: str) -> float:
    value = entry.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ContactModelError(f"{path}.{key}: expected a number")
    return float(value)


def parse_body_parts(text: str, quasistatic_factor: float = DEFAULT_QUASISTATIC_FACTOR) -> List[BodyPartParams]:
    """Parse a body-part data file (JSON array with unit-suffixed keys)."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ContactModelError(f"body-part file: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, list):
        raise ContactModelError("body-part file must contain a JSON array")

    parts: List[BodyPartParams] = []
    for index, entry in enumerate(raw):
        path = f"[{index}]"
        if not isinstance(entry, dict):
            raise ContactModelError(f"{path}: expected an object")
        unknown = sorted(set(entry) - set(_PART_KEYS))
        if unknown:
            raise ContactModelError(f"{path}: unknown key(s) {', '.join(unknown)}")
        name = entry.get("name")
        if not isinstance(name, str) or not name:
            raise ContactModelError(f"{path}.name: expected a non-empty string")
        transient = _part_number(entry, "transient_force_limit_n", path)
        quasistatic = (
            _part_number(entry, "quasistatic_force_limit_n", path)
            if "quasistatic_force_limit_n" in entry
            else transient * quasistatic_factor
        )
        parts.append(
            BodyPartParams(
                name=name,
                effective_mass=_part_number(entry, "effective_mass_kg", path),
                stiffness=n_per_mm_to_n_per_m(_part_number(entry, "stiffness_n_per_mm", path)),
                transient_force_limit=transient,
                quasistatic_force_limit=quasistatic,
                damping=_part_number(entry, "damping_ns_per_m", path) if "damping_ns_per_m" in entry else 0.0,
            )
        )
    return parts


def load_body_parts(path: str | Path, quasistatic_factor: float = DEFAULT_QUASISTATIC_FACTOR) -> List[BodyPartParams]:
    return parse_body_parts(Path(path).read_text(encoding="utf-8"), quasistatic_factor)


def body_part_table(extra_path: Optional[str | Path] = None) -> Dict[str, BodyPartParams]:
    """
    Built-in parts merged with a user data file.

    ``extra_path`` defaults to ``PFL_BODY_PARTS``; file entries replace
    built-ins of the same name.
    """
    settings = get_settings()
    table = {part.name: part for part in builtin_body_parts(settings.quasistatic_factor)}
    path = extra_path or settings.body_parts_path
    if path:
        extra = load_body_parts(path, settings.quasistatic_factor)
        logger.info("Loaded %d body part(s) from %s", len(extra), path)
        table.update({part.name: part for part in extra})
    return table


def lookup_body_part(name: str, parts: Dict[str, BodyPartParams] | Iterable[BodyPartParams]) -> BodyPartParams:
    """Find a body part by (case-insensitive) name."""
    candidates = parts.values() if isinstance(parts, dict) else parts
    wanted = name.strip().lower()
    for part in candidates:
        if part.name.lower() == wanted:
            return part
    raise ContactModelError(f"unknown body part {name!r}")


__all__ = [
    "RobotMassMode",
    "HumanMassMode",
    "EffectiveMassSpec",
    "BodyPartParams",
    "DeviationBand",
    "DEVIATION_TOLERANCE_N",
    "iso_robot_mass",
    "effective_mass",
    "contact_force",
    "velocity_limit",
    "classify_force_deviation",
    "robot_mass",
    "effective_mass_for",
    "builtin_body_parts",
    "parse_body_parts",
    "load_body_parts",
    "body_part_table",
    "lookup_body_part",
]
