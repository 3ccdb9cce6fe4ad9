"""
PFL risk-assessment pipeline.

This module wires the ``pfl`` building blocks to files on disk: it loads a
scenario document together with the robot description it names, resolves
the body-part table (built-ins plus ``PFL_BODY_PARTS``) and runs the
decision tree. It also assembles the robot summary and the map positions
used by the command line front end.

All relative paths are resolved against the current working directory.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pfl.ccfm import MapPosition
from pfl.contact_model import RobotMassMode, body_part_table, iso_robot_mass, robot_mass
from pfl.dynamics import ContactFrame, flange_pose
from pfl.errors import MapError, PFLError, ScenarioError
from pfl.risk_engine import AssessmentReport, assess, get_interpretation, parse_scenario
from pfl.robot_model import JointConfiguration, RobotModel, Vector3, load_mass, load_robot, total_moving_mass
from pfl.units import is_infinite


logger = logging.getLogger(__name__)

AXIS_DIRECTIONS: Dict[str, Vector3] = {
    "x": (1.0, 0.0, 0.0),
    "y": (0.0, 1.0, 0.0),
    "z": (0.0, 0.0, 1.0),
}


def _read(path: str | Path, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise PFLError(f"cannot read {what} {str(path)!r}: {exc.strerror}") from None


def build_assessment(scenario_path: str | Path, parts_path: Optional[str | Path] = None) -> AssessmentReport:
    """
    Load a scenario file and assess it under the interpretation it names.

    The returned report is safe to render as text or JSON directly.
    """
    document = parse_scenario(_read(scenario_path, "scenario file"))

    # 1. Robot model, only when the scenario names one
    model: Optional[RobotModel] = None
    if document.robot_path:
        if not Path(document.robot_path).is_file():
            raise ScenarioError(f"robot file {document.robot_path!r} not found (relative to the working directory)")
        model = load_robot(document.robot_path)

    # 2. Body parts and interpretation
    parts = body_part_table(parts_path)
    interpretation = get_interpretation(document.interpretation)

    # 3. Decision tree
    report = assess(model, document.scenario, interpretation, parts)
    logger.info("Assessed %s: %s", scenario_path, report.verdict.value)
    return report


def robot_info(
    model: RobotModel,
    directions: Optional[Dict[str, Vector3]] = None,
    q: Optional[Sequence[float]] = None,
    contact_link: Optional[str] = None,
) -> Dict[str, Any]:
    """
    Mass summary of a robot: moving mass, load, simplified robot mass and,
    given a joint configuration, the reflected mass at the flange per direction.
    """
    moving = total_moving_mass(model)
    info: Dict[str, Any] = {
        "name": model.name,
        "dof": model.dof,
        "links": model.link_names,
        "total_moving_mass_kg": moving,
        "load_mass_kg": load_mass(model),
        "iso_robot_mass_kg": iso_robot_mass(moving, load_mass(model)) if moving > 0 else None,
        "reference_positions_m": {label: list(xyz) for label, xyz in model.reference_positions.items()},
    }
    if q is None:
        return info

    configuration = JointConfiguration.of(q)
    link = contact_link or model.links[-1].name
    point = flange_pose(model, configuration)[:3, 3]
    reflected: Dict[str, Any] = {}
    for label, direction in (directions or AXIS_DIRECTIONS).items():
        contact = ContactFrame.create(tuple(point.tolist()), direction, link)
        mass = robot_mass(model, RobotMassMode.REFLECTED, configuration, contact)
        reflected[label] = "unbounded" if is_infinite(mass) else mass
    info["joint_configuration"] = list(configuration.q)
    info["flange_position_m"] = point.tolist()
    info["reflected_mass_kg"] = reflected
    return info


def load_map_positions(path: Optional[str | Path], model: RobotModel) -> List[MapPosition]:
    """
    Map positions from a JSON file, or the robot's reference positions.

    File entries carry ``label`` and optionally ``coordinates_m``,
    ``joint_configuration``, ``direction`` and ``link``.
    """
    if path is None:
        if not model.reference_positions:
            raise MapError(f"robot {model.name!r} has no reference positions; pass a positions file")
        return [MapPosition(label=label, coordinates=xyz) for label, xyz in model.reference_positions.items()]

    try:
        raw = json.loads(_read(path, "positions file"))
    except json.JSONDecodeError as exc:
        raise MapError(f"positions file: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, list) or not raw:
        raise MapError("positions file must contain a non-empty JSON array")

    positions: List[MapPosition] = []
    for index, entry in enumerate(raw):
        if not isinstance(entry, dict) or not isinstance(entry.get("label"), str):
            raise MapError(f"positions[{index}]: expected an object with a label")
        try:
            coordinates = entry.get("coordinates_m")
            joints = entry.get("joint_configuration")
            positions.append(
                MapPosition(
                    label=entry["label"],
                    coordinates=None if coordinates is None else tuple(float(v) for v in coordinates),  # type: ignore[arg-type]
                    joint_configuration=None if joints is None else JointConfiguration.of(joints),
                    direction=tuple(float(v) for v in entry.get("direction", (1.0, 0.0, 0.0))),  # type: ignore[arg-type]
                    link=entry.get("link"),
                )
            )
        except (TypeError, ValueError):
            raise MapError(f"positions[{index}]: coordinates, joint configuration and direction must be numbers") from None
    return positions


__all__ = [
    "AXIS_DIRECTIONS",
    "build_assessment",
    "robot_info",
    "load_map_positions",
]
