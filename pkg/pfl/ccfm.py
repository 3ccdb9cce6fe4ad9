"""
Constrained collision force maps: expected peak contact force for each
(position, velocity) pair of a robot and body part.

Maps are produced from the force model (interpretations A, B1, B2), from the
impact simulator, or imported from measured CSV data in the export format.
Velocity lookup is conservative: no interpolation between grid points.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

import numpy as np

from .contact_model import (
    BodyPartParams,
    RobotMassMode,
    contact_force,
    effective_mass,
    robot_mass,
)
from .dynamics import ContactFrame, flange_pose
from .errors import MapError, PFLError
from .impact_sim import ImpactConfig, simulate
from .robot_model import JointConfiguration, RobotModel, Vector3
from .units import INFINITE, Mass, format_sig, is_infinite


logger = logging.getLogger(__name__)

SIM_STEPS_PER_PERIOD = 1000
SVG_LOW_COLOR = (255, 255, 255)
SVG_HIGH_COLOR = (8, 48, 107)
SVG_TRANSIENT_COLOR = "#d62728"
SVG_QUASISTATIC_COLOR = "#ff7f0e"


class MapSource(str, Enum):
    MODEL_A = "model_A"
    MODEL_B1 = "model_B1"
    MODEL_B2 = "model_B2"
    SIMULATED = "simulated"
    MEASURED_IMPORT = "measured-import"


class ExportFormat(str, Enum):
    CSV = "csv"
    SVG = "svg"


@dataclass(frozen=True)
class MapPosition:
    label: str
    coordinates: Optional[Vector3] = None  # m, base frame
    joint_configuration: Optional[JointConfiguration] = None
    direction: Vector3 = (1.0, 0.0, 0.0)
    link: Optional[str] = None  # defaults to the last link


@dataclass(frozen=True, eq=False)
class CCFMGrid:
    robot: str
    body_part: str
    positions: Tuple[MapPosition, ...]
    velocities: np.ndarray  # m/s
    forces: np.ndarray  # N, positions x velocities
    source: MapSource
    transient_limit: Optional[float] = None
    quasistatic_limit: Optional[float] = None

    def __post_init__(self) -> None:
        if self.forces.shape != (len(self.positions), self.velocities.size):
            raise MapError(
                f"force matrix {self.forces.shape} does not match "
                f"{len(self.positions)} positions x {self.velocities.size} velocities"
            )
        if self.velocities.size == 0 or not self.positions:
            raise MapError("a map needs at least one position and one velocity")
        if np.any(np.diff(self.velocities) <= 0):
            raise MapError("velocities must be strictly increasing")
        if np.any(np.isnan(self.forces)) or np.any(self.forces < 0):
            raise MapError("forces must be >= 0")

    @property
    def labels(self) -> List[str]:
        return [position.label for position in self.positions]

    def row(self, label: str) -> np.ndarray:
        try:
            return self.forces[self.labels.index(label)]
        except ValueError:
            raise MapError(f"unknown position {label!r}; map has {', '.join(self.labels)}") from None


def default_velocity_grid() -> np.ndarray:
    """0.05 m/s to 1.5 m/s in steps of 0.05 m/s."""
    return np.round(np.arange(1, 31) * 0.05, 10)


def _check_velocities(velocities: Sequence[float]) -> np.ndarray:
    grid = np.asarray(velocities, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise MapError("velocity grid must be a non-empty list")
    if np.any(grid < 0) or not np.all(np.isfinite(grid)):
        raise MapError("velocities must be finite and >= 0")
    if np.any(np.diff(grid) <= 0):
        raise MapError("velocities must be strictly increasing")
    return grid


def _position_mass(model: RobotModel, position: MapPosition, mode: RobotMassMode) -> Mass:
    if mode is RobotMassMode.ISO_SIMPLIFIED:
        return robot_mass(model, mode)
    if position.joint_configuration is None:
        raise MapError(f"position {position.label!r} is unreachable: no joint configuration supplied")
    link = position.link or model.links[-1].name
    point = position.coordinates
    if point is None:
        # contact at the flange
        point = tuple(flange_pose(model, position.joint_configuration)[:3, 3].tolist())
    contact = ContactFrame.create(point, position.direction, link)
    return robot_mass(model, mode, position.joint_configuration, contact)


def _simulated_peak(args: Tuple[float, float, float, float]) -> float:
    m_r, velocity, stiffness, damping = args
    if velocity == 0:
        return 0.0
    period = 2.0 * math.pi * math.sqrt(m_r / stiffness)
    cfg = ImpactConfig(
        robot_mass=m_r,
        robot_velocity=velocity,
        stiffness=stiffness,
        human_mass=INFINITE,
        damping=damping,
        duration=period,
        dt=period / SIM_STEPS_PER_PERIOD,
    )
    return float(simulate(cfg).forces.max())


def generate_map(
    model: RobotModel,
    part: BodyPartParams,
    positions: Sequence[MapPosition],
    velocities: Sequence[float],
    source: MapSource,
    *,
    sim_robot_mass: RobotMassMode = RobotMassMode.REFLECTED,
    workers: int = 1,
) -> CCFMGrid:
    """
    Expected peak force for every (position, velocity) cell.

    Model sources use the force model with the interpretation's mass binding;
    ``simulated`` runs the constrained impact simulator with the robot mass
    chosen by ``sim_robot_mass`` and the body part's stiffness and damping.
    """
    grid = _check_velocities(velocities)
    if not positions:
        raise MapError("at least one position is required")
    labels = [position.label for position in positions]
    if len(set(labels)) != len(labels):
        raise MapError("position labels must be unique")
    if source is MapSource.MEASURED_IMPORT:
        raise MapError("measured maps are imported with parse_map_csv, not generated")

    forces = np.zeros((len(positions), grid.size))
    sim_jobs: List[Tuple[int, int, Tuple[float, float, float, float]]] = []
    try:
        for row, position in enumerate(positions):
            if source is MapSource.MODEL_A:
                mu: Mass = effective_mass(robot_mass(model, RobotMassMode.ISO_SIMPLIFIED), part.effective_mass)
            elif source is MapSource.MODEL_B1:
                mu = robot_mass(model, RobotMassMode.ISO_SIMPLIFIED)
            elif source is MapSource.MODEL_B2:
                mu = _position_mass(model, position, RobotMassMode.REFLECTED)
            else:
                mu = _position_mass(model, position, sim_robot_mass)

            if source is MapSource.SIMULATED and not is_infinite(mu):
                for column, velocity in enumerate(grid):
                    sim_jobs.append((row, column, (float(mu), float(velocity), part.stiffness, part.damping)))  # type: ignore[arg-type]
            else:
                forces[row] = [contact_force(float(v), mu, part.stiffness) for v in grid]
    except MapError:
        raise
    except PFLError as exc:
        raise MapError(str(exc)) from None

    if sim_jobs:
        arguments = [job[2] for job in sim_jobs]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                peaks = list(pool.map(_simulated_peak, arguments))
        else:
            peaks = [_simulated_peak(item) for item in arguments]
        for (row, column, _), peak in zip(sim_jobs, peaks):
            forces[row, column] = peak

    logger.info(
        "Generated %s map for %s/%s: %d positions x %d velocities",
        source.value,
        model.name,
        part.name,
        len(positions),
        grid.size,
    )
    return CCFMGrid(
        robot=model.name,
        body_part=part.name,
        positions=tuple(positions),
        velocities=grid,
        forces=forces,
        source=source,
        transient_limit=part.transient_force_limit,
        quasistatic_limit=part.quasistatic_force_limit,
    )


def lookup_max_velocity(grid: CCFMGrid, threshold: float, label: str) -> Optional[float]:
    """
    Largest grid velocity up to which every cell of the row stays within ``threshold``.

    Returns None when already the slowest grid velocity exceeds it.
    """
    row = grid.row(label)
    allowed: Optional[float] = None
    for velocity, force in zip(grid.velocities, row):
        if force > threshold:
            break
        allowed = float(velocity)
    return allowed


# ----- Export / import -----


def _export_csv(grid: CCFMGrid) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["position"] + [format_sig(v) for v in grid.velocities])
    for position, row in zip(grid.positions, grid.forces):
        writer.writerow([position.label] + [format_sig(force) for force in row])
    return buffer.getvalue()


def parse_map_csv(text: str, robot: str = "imported", body_part: str = "unknown") -> CCFMGrid:
    """Read a map in the CSV export format (measured data import)."""
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if len(rows) < 2 or not rows[0] or rows[0][0] != "position":
        raise MapError("map CSV needs a 'position,<velocities...>' header and at least one row")
    for index, row in enumerate(rows[1:], start=1):
        if len(row) != len(rows[0]):
            raise MapError(f"row {index}: expected {len(rows[0])} cells, got {len(row)}")
    try:
        velocities = np.array([float(cell) for cell in rows[0][1:]])
        forces = [[float(cell) for cell in row[1:]] for row in rows[1:]]
    except ValueError as exc:
        raise MapError(f"non-numeric cell: {exc}") from None
    return CCFMGrid(
        robot=robot,
        body_part=body_part,
        positions=tuple(MapPosition(label=row[0]) for row in rows[1:]),
        velocities=velocities,
        forces=np.array(forces),
        source=MapSource.MEASURED_IMPORT,
    )


def _color(force: float, scale_max: float) -> str:
    fraction = 1.0 if math.isinf(force) else min(force / scale_max, 1.0) if scale_max > 0 else 0.0
    channels = [round(low + (high - low) * fraction) for low, high in zip(SVG_LOW_COLOR, SVG_HIGH_COLOR)]
    return "#{:02x}{:02x}{:02x}".format(*channels)


def _iso_points(grid: CCFMGrid, threshold: float, left: float, top: float, cell_w: float, cell_h: float) -> List[str]:
    points: List[str] = []
    for index, row in enumerate(grid.forces):
        above = np.nonzero(row > threshold)[0]
        if above.size == 0:
            continue
        j = int(above[0])
        if j == 0:
            x = left
        else:
            low, high = row[j - 1], row[j]
            fraction = 1.0 if math.isinf(high) else (threshold - low) / (high - low)
            x = left + (j - 0.5 + fraction) * cell_w
        y = top + index * cell_h
        points.append(f"{x:.2f},{y:.2f}")
        points.append(f"{x:.2f},{y + cell_h:.2f}")
    return points


def _export_svg(grid: CCFMGrid) -> str:
    cell_w, cell_h = 36.0, 32.0
    left, top = 90.0, 50.0
    n_rows, n_cols = grid.forces.shape
    plot_w, plot_h = n_cols * cell_w, n_rows * cell_h
    legend_x = left + plot_w + 30.0
    width, height = legend_x + 110.0, top + plot_h + 70.0

    finite = grid.forces[np.isfinite(grid.forces)]
    limits = [value for value in (grid.transient_limit, grid.quasistatic_limit) if value is not None]
    scale_max = max([float(finite.max()) if finite.size else 0.0] + limits)

    out: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}" font-family="sans-serif" font-size="11">',
        f'<text x="{left:.2f}" y="24" font-size="14">Collision force map: '
        f"{escape(grid.robot)} / {escape(grid.body_part)} "
        f"({grid.source.value})</text>",
        "<defs>",
        '<linearGradient id="scale" x1="0" y1="1" x2="0" y2="0">',
        f'<stop offset="0" stop-color="{_color(0.0, 1.0)}"/>',
        f'<stop offset="1" stop-color="{_color(1.0, 1.0)}"/>',
        "</linearGradient>",
        "</defs>",
    ]
    for i, (position, row) in enumerate(zip(grid.positions, grid.forces)):
        y = top + i * cell_h
        label = escape(position.label)
        out.append(
            f'<text x="{left - 8:.2f}" y="{y + cell_h / 2 + 4:.2f}" text-anchor="end">{label}</text>'
        )
        for j, (velocity, force) in enumerate(zip(grid.velocities, row)):
            x = left + j * cell_w
            out.append(
                f'<rect x="{x:.2f}" y="{y:.2f}" width="{cell_w:.2f}" height="{cell_h:.2f}" '
                f'fill="{_color(float(force), scale_max)}" stroke="#cccccc" stroke-width="0.5">'
                f"<title>{label} @ {format_sig(float(velocity))} m/s: {format_sig(float(force))} N</title>"
                "</rect>"
            )
    for j, velocity in enumerate(grid.velocities):
        x = left + (j + 0.5) * cell_w
        out.append(
            f'<text x="{x:.2f}" y="{top + plot_h + 16:.2f}" text-anchor="middle" font-size="9">'
            f"{format_sig(float(velocity))}</text>"
        )
    out.append(
        f'<text x="{left + plot_w / 2:.2f}" y="{top + plot_h + 40:.2f}" text-anchor="middle">velocity [m/s]</text>'
    )

    for threshold, color, dash, name in (
        (grid.transient_limit, SVG_TRANSIENT_COLOR, "", "transient"),
        (grid.quasistatic_limit, SVG_QUASISTATIC_COLOR, ' stroke-dasharray="4,3"', "quasi-static"),
    ):
        if threshold is None:
            continue
        points = _iso_points(grid, threshold, left, top, cell_w, cell_h)
        if points:
            out.append(
                f'<polyline points="{" ".join(points)}" fill="none" stroke="{color}" stroke-width="2"{dash}>'
                f"<title>{name} limit {format_sig(threshold)} N</title></polyline>"
            )

    bar_top, bar_h = top, max(plot_h, 120.0)
    out.append(
        f'<path d="M{legend_x:.2f},{bar_top:.2f} h16 v{bar_h:.2f} h-16 Z" fill="url(#scale)" stroke="#333333"/>'
    )
    out.append(f'<text x="{legend_x + 22:.2f}" y="{bar_top + bar_h:.2f}">0 N</text>')
    out.append(f'<text x="{legend_x + 22:.2f}" y="{bar_top + 10:.2f}">{format_sig(scale_max)} N</text>')
    for threshold, color in ((grid.transient_limit, SVG_TRANSIENT_COLOR), (grid.quasistatic_limit, SVG_QUASISTATIC_COLOR)):
        if threshold is None or scale_max <= 0:
            continue
        y = bar_top + bar_h * (1.0 - threshold / scale_max)
        out.append(
            f'<line x1="{legend_x - 4:.2f}" y1="{y:.2f}" x2="{legend_x + 20:.2f}" y2="{y:.2f}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(f'<text x="{legend_x + 22:.2f}" y="{y + 4:.2f}">{format_sig(threshold)} N</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export_map(grid: CCFMGrid, fmt: ExportFormat | str = ExportFormat.CSV) -> str:
    """Render ``grid`` as CSV (6 significant digits) or as an SVG heatmap."""
    fmt = ExportFormat(fmt)
    return _export_csv(grid) if fmt is ExportFormat.CSV else _export_svg(grid)


__all__ = [
    "MapSource",
    "ExportFormat",
    "MapPosition",
    "CCFMGrid",
    "default_velocity_grid",
    "generate_map",
    "lookup_max_velocity",
    "parse_map_csv",
    "export_map",
]
