"""
Published hand/back contact-force measurements and their replay through the
force-deviation classifier.

The records hold measured peak forces at the C and N reference-cube positions
for four collaborative robots, measured with a spring-damper test apparatus at
the velocity limit each interpretation yields. They cannot be reproduced
without the hardware; they serve as import fixtures.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

from .contact_model import (
    BodyPartParams,
    DeviationBand,
    builtin_body_parts,
    classify_force_deviation,
    contact_force,
    effective_mass,
    lookup_body_part,
)
from .errors import PFLError
from .risk_engine import InterpretationId


# Apparatus load limit; interpretation A hand tests were expected to exceed it and were skipped.
APPARATUS_LIMIT_N = 500.0


class ReplayReference(str, Enum):
    THRESHOLD = "threshold"
    PREDICTED = "predicted"


@dataclass(frozen=True)
class ExperimentRecord:
    robot: str
    body_part: str
    interpretation: InterpretationId
    position: str  # "C" or "N"
    velocity: float  # m/s
    measured_force: Optional[float]  # N; None when not performed
    color: Optional[str]  # published legend colour

    @property
    def performed(self) -> bool:
        return self.measured_force is not None


@dataclass(frozen=True)
class ReplayRow:
    record: ExperimentRecord
    expected: float  # N
    band: DeviationBand
    agrees_with_published_color: bool

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self.record)
        data["interpretation"] = self.record.interpretation.value
        data.update(
            expected_N=self.expected,
            band=self.band.value,
            band_color=self.band.color,
            agrees_with_published_color=self.agrees_with_published_color,
        )
        return data


# Simplified and reflected robot masses as listed alongside the measurements.
ROBOT_MASSES: Dict[str, Dict[str, Optional[float]]] = {
    "UR10e": {"iso": 10.87, "reflected": None},
    "FE": {"iso": 5.54, "reflected": 2.9},
    "LWR": {"iso": 6.75, "reflected": None},
    "TM5": {"iso": 11.35, "reflected": None},
}

# (body part, robot) -> interpretation -> velocity [m/s]
VELOCITY_LIMITS: Dict[str, Dict[str, Dict[str, float]]] = {
    "hand": {
        "UR10e": {"A": 1.25, "B1": 0.28},
        "FE": {"A": 1.29, "B1": 0.40, "B2": 0.55},
        "LWR": {"A": 1.27, "B1": 0.36},
        "TM5": {"A": 1.25, "B1": 0.28},
    },
    "back": {
        "UR10e": {"A": 1.25, "B1": 0.28},
        "FE": {"A": 0.63, "B1": 0.40, "B2": 0.55},
        "LWR": {"A": 0.55, "B1": 0.36},
        "TM5": {"A": 0.46, "B1": 0.28},
    },
}

# (body part, robot, interpretation) -> (C-pos force, colour, N-pos force, colour)
_MEASUREMENTS = {
    ("hand", "UR10e", "A"): (None, None, None, None),
    ("hand", "UR10e", "B1"): (316.0, "red", 230.0, "babyblue"),
    ("hand", "FE", "A"): (None, None, None, None),
    ("hand", "FE", "B1"): (289.0, "green", 228.0, "babyblue"),
    ("hand", "FE", "B2"): (413.0, "red", 347.0, "orange"),
    ("hand", "LWR", "A"): (None, None, None, None),
    ("hand", "LWR", "B1"): (368.0, "orange", 279.0, "green"),
    ("hand", "TM5", "A"): (None, None, None, None),
    ("hand", "TM5", "B1"): (427.0, "red", 292.0, "orange"),
    ("back", "UR10e", "A"): (379.0, "babyblue", 196.0, "blue"),
    ("back", "UR10e", "B1"): (257.0, "blue", 296.0, "blue"),
    ("back", "FE", "A"): (300.0, "babyblue", 237.0, "blue"),
    ("back", "FE", "B1"): (191.0, "blue", 147.0, "blue"),
    ("back", "FE", "B2"): (269.0, "blue", 216.0, "blue"),
    ("back", "LWR", "A"): (444.0, "orange", 276.0, "blue"),
    ("back", "LWR", "B1"): (289.0, "blue", 237.0, "blue"),
    ("back", "TM5", "A"): (443.0, "orange", 354.0, "babyblue"),
    ("back", "TM5", "B1"): (311.0, "blue", 246.0, "blue"),
}


def published_records() -> List[ExperimentRecord]:
    """All records in table order; hand tests under interpretation A are listed as not performed."""
    records: List[ExperimentRecord] = []
    for (part, robot, interp), (c_force, c_color, n_force, n_color) in _MEASUREMENTS.items():
        velocity = VELOCITY_LIMITS[part][robot][interp]
        for position, force, color in (("C", c_force, c_color), ("N", n_force, n_color)):
            records.append(
                ExperimentRecord(
                    robot=robot,
                    body_part=part,
                    interpretation=InterpretationId(interp),
                    position=position,
                    velocity=velocity,
                    measured_force=force,
                    color=color,
                )
            )
    return records


def predicted_force(record: ExperimentRecord, part: BodyPartParams) -> float:
    """Force-model prediction at the record's velocity with the listed robot masses."""
    masses = ROBOT_MASSES[record.robot]
    if record.interpretation is InterpretationId.A:
        mu = effective_mass(masses["iso"], part.effective_mass)  # type: ignore[arg-type]
    elif record.interpretation is InterpretationId.B1:
        mu = masses["iso"]  # type: ignore[assignment]
    elif record.interpretation is InterpretationId.B2 and masses["reflected"] is not None:
        mu = masses["reflected"]  # type: ignore[assignment]
    else:
        raise PFLError(f"no listed mass for {record.robot} under interpretation {record.interpretation.value}")
    return contact_force(record.velocity, mu, part.stiffness)


def replay(
    records: Optional[Sequence[ExperimentRecord]] = None,
    reference: ReplayReference | str = ReplayReference.THRESHOLD,
    parts: Optional[Sequence[BodyPartParams]] = None,
) -> List[ReplayRow]:
    """
    Classify every performed record against its threshold or the model prediction.

    The published colours were assigned against the force threshold, so only
    ``threshold`` replays are expected to agree with them.
    """
    reference = ReplayReference(reference)
    records = published_records() if records is None else records
    parts = builtin_body_parts() if parts is None else parts
    rows: List[ReplayRow] = []
    for record in records:
        if not record.performed:
            continue
        part = lookup_body_part(record.body_part, parts)
        if reference is ReplayReference.THRESHOLD:
            expected = part.transient_force_limit
        else:
            expected = predicted_force(record, part)
        band = classify_force_deviation(record.measured_force, expected)  # type: ignore[arg-type]
        rows.append(
            ReplayRow(
                record=record,
                expected=expected,
                band=band,
                agrees_with_published_color=band.color == record.color,
            )
        )
    return rows


__all__ = [
    "APPARATUS_LIMIT_N",
    "ReplayReference",
    "ExperimentRecord",
    "ReplayRow",
    "ROBOT_MASSES",
    "VELOCITY_LIMITS",
    "published_records",
    "predicted_force",
    "replay",
]
