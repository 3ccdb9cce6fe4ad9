"""
Rigid-body dynamics of the serial chain: forward kinematics, the point
Jacobian, the joint-space mass matrix and the reflected mass

    m_r,u = (u^T Lambda_v^-1 u)^-1,   Lambda^-1 = J M^-1 J^T

where only the translational 3x3 block of the Cartesian mass inverse is used.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.spatial.transform import Rotation

from .errors import DynamicsError
from .robot_model import JointConfiguration, JointType, LinkSpec, RobotModel, Vector3
from .units import INFINITE, Mass


logger = logging.getLogger(__name__)

# u^T Lambda^-1 u below this [1/kg] is treated as a singular direction (cap 1e9 kg)
SINGULAR_DIRECTION_THRESHOLD = 1e-9
UNIT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ContactFrame:
    point: Vector3
    direction: Vector3
    attached_link: str

    def __post_init__(self) -> None:
        norm = float(np.linalg.norm(self.direction))
        if abs(norm - 1.0) > UNIT_TOLERANCE:
            raise DynamicsError(f"contact direction must be a unit vector (norm {norm:.12g})")

    @classmethod
    def create(cls, point: Sequence[float], direction: Sequence[float], attached_link: str) -> "ContactFrame":
        """Build a contact frame, normalizing ``direction``."""
        if len(point) != 3 or len(direction) != 3:
            raise DynamicsError("contact point and direction need 3 components")
        u = np.asarray(direction, dtype=float)
        norm = float(np.linalg.norm(u))
        if norm == 0.0:
            raise DynamicsError("contact direction must be non-zero")
        u = u / norm
        return cls(
            point=tuple(float(v) for v in point),  # type: ignore[arg-type]
            direction=tuple(float(v) for v in u),  # type: ignore[arg-type]
            attached_link=attached_link,
        )


@dataclass(frozen=True, eq=False)
class MassMatrix:
    values: np.ndarray

    @property
    def asymmetry(self) -> float:
        scale = max(float(np.abs(self.values).max()), 1e-300)
        return float(np.abs(self.values - self.values.T).max()) / scale

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(0.5 * (self.values + self.values.T)).min())


@dataclass
class _ChainState:
    link_frames: List[np.ndarray]
    tip_frames: List[np.ndarray]
    joint_origins: List[Optional[np.ndarray]]
    joint_axes: List[Optional[np.ndarray]]
    joint_columns: List[Optional[int]]


def _homogeneous(rotation: np.ndarray, translation: np.ndarray) -> np.ndarray:
    transform = np.eye(4)
    transform[:3, :3] = rotation
    transform[:3, 3] = translation
    return transform


def _origin_transform(link: LinkSpec) -> np.ndarray:
    rotation = Rotation.from_euler("xyz", link.origin_rotation).as_matrix()
    return _homogeneous(rotation, np.asarray(link.origin_translation, dtype=float))


def _joint_transform(link: LinkSpec, value: float) -> np.ndarray:
    axis = np.asarray(link.joint_axis, dtype=float)
    if link.joint_type is JointType.REVOLUTE:
        return _homogeneous(Rotation.from_rotvec(axis * value).as_matrix(), np.zeros(3))
    if link.joint_type is JointType.PRISMATIC:
        return _homogeneous(np.eye(3), axis * value)
    return np.eye(4)


def _check_configuration(model: RobotModel, q: JointConfiguration | Sequence[float]) -> np.ndarray:
    values = q.as_array() if isinstance(q, JointConfiguration) else np.asarray(q, dtype=float)
    if model.dof < 1:
        raise DynamicsError(f"robot {model.name!r} has no moving joint")
    if values.shape != (model.dof,):
        raise DynamicsError(f"joint configuration has {values.size} values, robot {model.name!r} has {model.dof} DOF")
    return values


def _chain(model: RobotModel, q: np.ndarray) -> _ChainState:
    state = _ChainState([], [], [], [], [])
    parent = np.eye(4)
    column = 0
    for link in model.links:
        if link.is_moving:
            state.joint_origins.append(parent[:3, 3].copy())
            state.joint_axes.append(parent[:3, :3] @ np.asarray(link.joint_axis, dtype=float))
            state.joint_columns.append(column)
            frame = parent @ _joint_transform(link, q[column])
            column += 1
        else:
            state.joint_origins.append(None)
            state.joint_axes.append(None)
            state.joint_columns.append(None)
            frame = parent
        tip = frame @ _origin_transform(link)
        state.link_frames.append(frame)
        state.tip_frames.append(tip)
        parent = tip
    return state


def _point_jacobian(model: RobotModel, state: _ChainState, point: np.ndarray, link_index: int) -> np.ndarray:
    jacobian = np.zeros((3, model.dof))
    for i in range(link_index + 1):
        column = state.joint_columns[i]
        if column is None:
            continue
        axis = state.joint_axes[i]
        if model.links[i].joint_type is JointType.REVOLUTE:
            jacobian[:, column] = np.cross(axis, point - state.joint_origins[i])
        else:
            jacobian[:, column] = axis
    return jacobian


def _angular_jacobian(model: RobotModel, state: _ChainState, link_index: int) -> np.ndarray:
    jacobian = np.zeros((3, model.dof))
    for i in range(link_index + 1):
        column = state.joint_columns[i]
        if column is not None and model.links[i].joint_type is JointType.REVOLUTE:
            jacobian[:, column] = state.joint_axes[i]
    return jacobian


def _resolve_link(model: RobotModel, name: str) -> int:
    try:
        return model.link_index(name)
    except KeyError:
        raise DynamicsError(f"unknown link {name!r} in robot {model.name!r}") from None


def forward_kinematics(model: RobotModel, q: JointConfiguration | Sequence[float]) -> Dict[str, np.ndarray]:
    """Base-to-link transforms (link frame, after joint motion) keyed by link name."""
    state = _chain(model, _check_configuration(model, q))
    return {link.name: frame for link, frame in zip(model.links, state.link_frames)}


def flange_pose(model: RobotModel, q: JointConfiguration | Sequence[float]) -> np.ndarray:
    """Tip frame of the last link."""
    return _chain(model, _check_configuration(model, q)).tip_frames[-1]


def contact_jacobian(
    model: RobotModel, q: JointConfiguration | Sequence[float], contact: ContactFrame
) -> np.ndarray:
    """3 x n linear-velocity Jacobian of ``contact.point`` rigidly attached to its link."""
    values = _check_configuration(model, q)
    link_index = _resolve_link(model, contact.attached_link)
    state = _chain(model, values)
    return _point_jacobian(model, state, np.asarray(contact.point, dtype=float), link_index)


def mass_matrix(model: RobotModel, q: JointConfiguration | Sequence[float]) -> MassMatrix:
    """
    Joint-space mass matrix assembled link by link:

        M = sum_i m_i Jv_i^T Jv_i + Jw_i^T R_i I_i R_i^T Jw_i

    Payload and adapter are a point mass at the flange.
    """
    values = _check_configuration(model, q)
    state = _chain(model, values)
    matrix = np.zeros((model.dof, model.dof))
    for index, link in enumerate(model.links):
        frame = state.link_frames[index]
        com = frame[:3, :3] @ np.asarray(link.com, dtype=float) + frame[:3, 3]
        jv = _point_jacobian(model, state, com, index)
        jw = _angular_jacobian(model, state, index)
        inertia_world = frame[:3, :3] @ link.inertia_matrix @ frame[:3, :3].T
        matrix += link.mass * jv.T @ jv + jw.T @ inertia_world @ jw

    load = model.payload_mass + model.adapter_mass
    if load > 0:
        last = len(model.links) - 1
        jv = _point_jacobian(model, state, state.tip_frames[last][:3, 3], last)
        matrix += load * jv.T @ jv
    return MassMatrix(0.5 * (matrix + matrix.T))


def kinetic_energy(
    model: RobotModel, q: JointConfiguration | Sequence[float], qdot: Sequence[float]
) -> float:
    """Per-link kinetic energy sum from recursively propagated link velocities."""
    values = _check_configuration(model, q)
    rates = np.asarray(qdot, dtype=float)
    if rates.shape != values.shape:
        raise DynamicsError("joint velocity length does not match DOF")
    state = _chain(model, values)

    omega = np.zeros(3)
    parent_origin = np.zeros(3)
    velocity = np.zeros(3)  # linear velocity of parent_origin
    energy = 0.0
    for index, link in enumerate(model.links):
        frame = state.link_frames[index]
        origin = frame[:3, 3]
        velocity = velocity + np.cross(omega, origin - parent_origin)
        column = state.joint_columns[index]
        if column is not None:
            if link.joint_type is JointType.REVOLUTE:
                omega = omega + state.joint_axes[index] * rates[column]
            else:
                velocity = velocity + state.joint_axes[index] * rates[column]
        com = frame[:3, :3] @ np.asarray(link.com, dtype=float) + origin
        v_com = velocity + np.cross(omega, com - origin)
        inertia_world = frame[:3, :3] @ link.inertia_matrix @ frame[:3, :3].T
        energy += 0.5 * link.mass * float(v_com @ v_com) + 0.5 * float(omega @ inertia_world @ omega)
        tip = state.tip_frames[index][:3, 3]
        velocity = velocity + np.cross(omega, tip - origin)
        parent_origin = tip

    load = model.payload_mass + model.adapter_mass
    energy += 0.5 * load * float(velocity @ velocity)
    return energy


def cartesian_mass_inverse(
    model: RobotModel, q: JointConfiguration | Sequence[float], contact: ContactFrame
) -> np.ndarray:
    """Translational block J M^-1 J^T of the Cartesian mass matrix inverse."""
    matrix = mass_matrix(model, q).values
    try:
        factor = cho_factor(matrix)
    except LinAlgError:
        raise DynamicsError(f"mass matrix of robot {model.name!r} is not positive definite") from None
    jacobian = contact_jacobian(model, q, contact)
    return jacobian @ cho_solve(factor, jacobian.T)


def reflected_mass(
    model: RobotModel, q: JointConfiguration | Sequence[float], contact: ContactFrame
) -> Mass:
    """Robot mass perceived at the contact point along ``contact.direction``; ``INFINITE`` near singular directions."""
    inverse = cartesian_mass_inverse(model, q, contact)
    u = np.asarray(contact.direction, dtype=float)
    u = u / np.linalg.norm(u)
    mobility = float(u @ inverse @ u)
    if mobility < SINGULAR_DIRECTION_THRESHOLD:
        logger.info(
            "Contact direction %s on %s is near-singular (u^T Lambda^-1 u = %.3g)",
            contact.direction,
            contact.attached_link,
            mobility,
        )
        return INFINITE
    return 1.0 / mobility


__all__ = [
    "ContactFrame",
    "MassMatrix",
    "SINGULAR_DIRECTION_THRESHOLD",
    "forward_kinematics",
    "flange_pose",
    "contact_jacobian",
    "mass_matrix",
    "kinetic_energy",
    "cartesian_mass_inverse",
    "reflected_mass",
]
