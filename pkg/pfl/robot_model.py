"""
Robot description: serial-chain link data, payload and reference positions.

The on-disk format is a JSON document with explicit unit suffixes in every
numeric key. Frame convention for each link:

  * the joint sits at the parent's tip frame (the base frame for the first link),
  * the link frame is the joint frame after the joint motion about/along
    ``joint_axis`` (expressed in that frame),
  * ``com_m`` and ``inertia_kgm2`` are expressed in the link frame,
  * ``origin_xyz_m`` / ``origin_rpy_rad`` take the link frame to the link tip
    frame, where the next joint sits. Angles are extrinsic XYZ (roll, pitch, yaw).

Example:
    {
      "name": "single",
      "links": [
        {"name": "arm", "joint_type": "revolute", "joint_axis": [0, 0, 1],
         "origin_xyz_m": [1, 0, 0], "mass_kg": 2, "com_m": [1, 0, 0]}
      ]
    }
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import RobotParseError


logger = logging.getLogger(__name__)

Vector3 = Tuple[float, float, float]

AXIS_NORM_TOLERANCE = 1e-9
PSD_TOLERANCE = 1e-12

_TOP_LEVEL_KEYS = ("name", "payload_mass_kg", "adapter_mass_kg", "links", "reference_positions_m")
_LINK_KEYS = (
    "name",
    "joint_type",
    "joint_axis",
    "origin_xyz_m",
    "origin_rpy_rad",
    "mass_kg",
    "com_m",
    "inertia_kgm2",
    "order",
)


class JointType(str, Enum):
    REVOLUTE = "revolute"
    PRISMATIC = "prismatic"
    FIXED = "fixed"


@dataclass(frozen=True)
class LinkSpec:
    name: str
    joint_type: JointType
    joint_axis: Vector3 = (0.0, 0.0, 1.0)
    origin_translation: Vector3 = (0.0, 0.0, 0.0)
    origin_rotation: Vector3 = (0.0, 0.0, 0.0)
    mass: float = 0.0
    com: Vector3 = (0.0, 0.0, 0.0)
    # Ixx, Iyy, Izz, Ixy, Ixz, Iyz about the COM, link frame
    inertia: Tuple[float, float, float, float, float, float] = (0.0,) * 6

    @property
    def is_moving(self) -> bool:
        return self.joint_type is not JointType.FIXED

    @property
    def inertia_matrix(self) -> np.ndarray:
        ixx, iyy, izz, ixy, ixz, iyz = self.inertia
        return np.array(
            [
                [ixx, ixy, ixz],
                [ixy, iyy, iyz],
                [ixz, iyz, izz],
            ]
        )


@dataclass(frozen=True)
class RobotModel:
    name: str
    links: Tuple[LinkSpec, ...]
    payload_mass: float = 0.0
    adapter_mass: float = 0.0
    reference_positions: Dict[str, Vector3] = field(default_factory=dict)

    @property
    def dof(self) -> int:
        return sum(1 for link in self.links if link.is_moving)

    @property
    def link_names(self) -> List[str]:
        return [link.name for link in self.links]

    def link_index(self, name: str) -> int:
        for index, link in enumerate(self.links):
            if link.name == name:
                return index
        raise KeyError(name)


@dataclass(frozen=True)
class JointConfiguration:
    q: Tuple[float, ...]

    @classmethod
    def of(cls, values: Sequence[float]) -> "JointConfiguration":
        return cls(tuple(float(v) for v in values))

    def __len__(self) -> int:
        return len(self.q)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.q, dtype=float)


# ----- Parsing helpers -----


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise RobotParseError("expected a number", field=path)
    number = float(value)
    if not math.isfinite(number):
        raise RobotParseError("must be finite", field=path)
    return number


def _vector(value: Any, path: str, length: int = 3) -> Tuple[float, ...]:
    if not isinstance(value, list) or len(value) != length:
        raise RobotParseError(f"expected an array of {length} numbers", field=path)
    return tuple(_number(item, f"{path}[{i}]") for i, item in enumerate(value))


def _reject_unknown(obj: Dict[str, Any], allowed: Sequence[str], path: str) -> None:
    for key in obj:
        if key not in allowed:
            where = f"{path}.{key}" if path else key
            raise RobotParseError("unknown key", field=where)


def _require(obj: Dict[str, Any], key: str, path: str) -> Any:
    if key not in obj:
        where = f"{path}.{key}" if path else key
        raise RobotParseError("missing required key", field=where)
    return obj[key]


def _parse_link(raw: Any, path: str) -> Tuple[Optional[int], LinkSpec]:
    if not isinstance(raw, dict):
        raise RobotParseError("expected an object", field=path)
    _reject_unknown(raw, _LINK_KEYS, path)

    name = _require(raw, "name", path)
    if not isinstance(name, str) or not name:
        raise RobotParseError("expected a non-empty string", field=f"{path}.name")

    joint_raw = _require(raw, "joint_type", path)
    try:
        joint_type = JointType(joint_raw)
    except ValueError:
        raise RobotParseError(
            "expected one of revolute, prismatic, fixed", field=f"{path}.joint_type"
        ) from None

    if joint_type is JointType.FIXED:
        axis = _vector(raw.get("joint_axis", [0, 0, 1]), f"{path}.joint_axis")
    else:
        axis = _vector(_require(raw, "joint_axis", path), f"{path}.joint_axis")
        norm = float(np.linalg.norm(axis))
        if abs(norm - 1.0) > AXIS_NORM_TOLERANCE:
            raise RobotParseError(f"joint axis must have unit norm (got {norm:.12g})", field=f"{path}.joint_axis")

    mass = _number(_require(raw, "mass_kg", path), f"{path}.mass_kg")
    if mass < 0:
        raise RobotParseError("mass must be >= 0", field=f"{path}.mass_kg")

    inertia = _vector(raw.get("inertia_kgm2", [0.0] * 6), f"{path}.inertia_kgm2", length=6)
    link = LinkSpec(
        name=name,
        joint_type=joint_type,
        joint_axis=axis,  # type: ignore[arg-type]
        origin_translation=_vector(raw.get("origin_xyz_m", [0, 0, 0]), f"{path}.origin_xyz_m"),  # type: ignore[arg-type]
        origin_rotation=_vector(raw.get("origin_rpy_rad", [0, 0, 0]), f"{path}.origin_rpy_rad"),  # type: ignore[arg-type]
        mass=mass,
        com=_vector(raw.get("com_m", [0, 0, 0]), f"{path}.com_m"),  # type: ignore[arg-type]
        inertia=inertia,  # type: ignore[arg-type]
    )
    eigenvalues = np.linalg.eigvalsh(link.inertia_matrix)
    if eigenvalues.min() < -PSD_TOLERANCE * max(1.0, float(np.abs(eigenvalues).max())):
        raise RobotParseError("inertia tensor must be positive semidefinite", field=f"{path}.inertia_kgm2")

    order = raw.get("order")
    if order is not None and (isinstance(order, bool) or not isinstance(order, int)):
        raise RobotParseError("expected an integer", field=f"{path}.order")
    return order, link


def parse_robot(text: str) -> RobotModel:
    """
    Parse and validate a robot description document.

    Raises ``RobotParseError`` with line/column for JSON syntax errors and
    with a field path (e.g. ``links[0].mass_kg``) for semantic errors.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RobotParseError(exc.msg, line=exc.lineno, column=exc.colno) from None

    if not isinstance(raw, dict):
        raise RobotParseError("document must be a JSON object", line=1, column=1)
    _reject_unknown(raw, _TOP_LEVEL_KEYS, "")

    name = _require(raw, "name", "")
    if not isinstance(name, str) or not name:
        raise RobotParseError("expected a non-empty string", field="name")

    payload = _number(raw.get("payload_mass_kg", 0.0), "payload_mass_kg")
    adapter = _number(raw.get("adapter_mass_kg", 0.0), "adapter_mass_kg")
    for key, value in (("payload_mass_kg", payload), ("adapter_mass_kg", adapter)):
        if value < 0:
            raise RobotParseError("mass must be >= 0", field=key)

    links_raw = _require(raw, "links", "")
    if not isinstance(links_raw, list) or not links_raw:
        raise RobotParseError("expected a non-empty array", field="links")
    parsed = [_parse_link(item, f"links[{i}]") for i, item in enumerate(links_raw)]

    orders = [order for order, _ in parsed]
    if all(order is not None for order in orders):
        if len(set(orders)) != len(orders):
            raise RobotParseError("order values must be unique", field="links")
        parsed.sort(key=lambda pair: pair[0])  # type: ignore[arg-type,return-value]
    elif any(order is not None for order in orders):
        raise RobotParseError("order must be given for every link or for none", field="links")
    links = tuple(link for _, link in parsed)

    seen: Dict[str, int] = {}
    for index, link in enumerate(links):
        if link.name in seen:
            raise RobotParseError(f"duplicate link name {link.name!r}", field=f"links[{index}].name")
        seen[link.name] = index

    positions_raw = raw.get("reference_positions_m", {})
    if not isinstance(positions_raw, dict):
        raise RobotParseError("expected an object", field="reference_positions_m")
    positions = {
        str(label): _vector(value, f"reference_positions_m.{label}")
        for label, value in positions_raw.items()
    }

    model = RobotModel(
        name=name,
        links=links,
        payload_mass=payload,
        adapter_mass=adapter,
        reference_positions=positions,  # type: ignore[arg-type]
    )
    logger.debug("Parsed robot %s: %d links, %d DOF", model.name, len(model.links), model.dof)
    return model


def load_robot(path: str | Path) -> RobotModel:
    """Read and parse a robot description file."""
    return parse_robot(Path(path).read_text(encoding="utf-8"))


def serialize_robot(model: RobotModel) -> str:
    """Write ``model`` back into the JSON description format (canonical key order)."""
    document: Dict[str, Any] = {
        "name": model.name,
        "payload_mass_kg": model.payload_mass,
        "adapter_mass_kg": model.adapter_mass,
        "links": [
            {
                "name": link.name,
                "joint_type": link.joint_type.value,
                "joint_axis": list(link.joint_axis),
                "origin_xyz_m": list(link.origin_translation),
                "origin_rpy_rad": list(link.origin_rotation),
                "mass_kg": link.mass,
                "com_m": list(link.com),
                "inertia_kgm2": list(link.inertia),
            }
            for link in model.links
        ],
        "reference_positions_m": {label: list(xyz) for label, xyz in model.reference_positions.items()},
    }
    return json.dumps(document, indent=2) + "\n"


def total_moving_mass(model: RobotModel) -> float:
    """Mass of every link from the first non-fixed joint outwards (``M`` in the ISO mass model)."""
    for index, link in enumerate(model.links):
        if link.is_moving:
            return float(sum(l.mass for l in model.links[index:]))
    return 0.0


def load_mass(model: RobotModel) -> float:
    """Load term of the ISO mass model: payload plus tool adapter."""
    return model.payload_mass + model.adapter_mass


__all__ = [
    "JointType",
    "LinkSpec",
    "RobotModel",
    "JointConfiguration",
    "Vector3",
    "parse_robot",
    "load_robot",
    "serialize_robot",
    "total_moving_mass",
    "load_mass",
]
