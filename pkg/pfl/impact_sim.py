"""
One-dimensional robot/body-part collision simulator.

The robot (a point mass moving towards +x) hits the body part through a
unilateral spring-damper. The body part is either a free mass or, for a
constrained contact, fixed in place (infinite mass). The robot may react:

  * detection + retraction: once the contact force first exceeds
    ``detection_force`` the robot waits ``reaction_delay`` and then moves back
    at ``retraction_velocity`` (commanded velocity, not a force controller);
  * clamp hold: without a reaction the robot brakes where it first comes to
    rest inside the contact and keeps the body part clamped.

The default integrator propagates the piecewise-linear dynamics exactly
(matrix exponential per step) and locates mode switches inside a step with a
root finder, so energy is conserved to round-off and the sampled peak only
carries the O(dt^2) sampling error.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import expm
from scipy.optimize import brentq

from .contact_model import effective_mass
from .errors import ImpactConfigError
from .trace import ForceTrace, TraceSource
from .units import INFINITE, Mass, is_infinite


logger = logging.getLogger(__name__)

DEFAULT_DT = 1e-5
STEPS_PER_PERIOD_MIN = 50


class Integrator(str, Enum):
    EXACT = "exact"
    SYMPLECTIC_EULER = "symplectic_euler"


@dataclass(frozen=True)
class ImpactConfig:
    robot_mass: float  # kg
    robot_velocity: float  # m/s
    stiffness: float  # N/m
    human_mass: Mass = INFINITE  # INFINITE: constrained body part
    damping: float = 0.0  # N*s/m
    detection_force: Optional[float] = None  # N, None: detection off
    reaction_delay: float = 0.0  # s
    retraction_velocity: float = 0.0  # m/s
    duration: float = 0.05  # s
    dt: float = DEFAULT_DT  # s
    clamp_hold: bool = False
    integrator: Integrator = Integrator.EXACT

    def __post_init__(self) -> None:
        if not self.robot_mass > 0:
            raise ImpactConfigError("robot_mass must be > 0")
        if not is_infinite(self.human_mass) and not self.human_mass > 0:  # type: ignore[operator]
            raise ImpactConfigError("human_mass must be > 0 or infinite")
        if not (self.robot_velocity >= 0 and math.isfinite(self.robot_velocity)):
            raise ImpactConfigError("robot_velocity must be >= 0")
        if not self.stiffness > 0:
            raise ImpactConfigError("stiffness must be > 0")
        if self.damping < 0:
            raise ImpactConfigError("damping must be >= 0")
        if self.detection_force is not None and not self.detection_force > 0:
            raise ImpactConfigError("detection_force must be > 0 when set")
        if self.reaction_delay < 0 or self.retraction_velocity < 0:
            raise ImpactConfigError("reaction_delay and retraction_velocity must be >= 0")
        if not self.dt > 0:
            raise ImpactConfigError("dt must be > 0")
        if self.dt > self.contact_period / STEPS_PER_PERIOD_MIN:
            raise ImpactConfigError(
                f"dt {self.dt:.3g} s does not resolve the contact oscillation "
                f"(needs <= {self.contact_period / STEPS_PER_PERIOD_MIN:.3g} s)"
            )
        if self.duration < 10 * self.dt:
            raise ImpactConfigError("duration must cover at least 10 time steps")

    @property
    def mu(self) -> float:
        return float(effective_mass(self.robot_mass, self.human_mass))  # type: ignore[arg-type]

    @property
    def contact_period(self) -> float:
        """Period of the undamped contact oscillation, 2*pi*sqrt(mu/k)."""
        return 2.0 * math.pi * math.sqrt(self.mu / self.stiffness)


@dataclass
class SimulationRun:
    trace: ForceTrace
    states: np.ndarray  # (samples, 4): robot x, robot v, human x, human v
    events: List[Tuple[float, str]] = field(default_factory=list)


@dataclass
class _Mode:
    in_contact: bool
    robot_free: bool = True
    held: bool = False
    detected: bool = False
    retract_at: Optional[float] = None
    retracting: bool = False


def peak_force_analytic(cfg: ImpactConfig) -> float:
    """Undamped, reaction-free peak force v*sqrt(mu*k)."""
    if cfg.damping > 0 or cfg.detection_force is not None:
        raise ImpactConfigError("the analytic peak needs damping = 0 and detection off")
    return cfg.robot_velocity * math.sqrt(cfg.mu * cfg.stiffness)


def total_energy(cfg: ImpactConfig, state: np.ndarray) -> float:
    """Kinetic energy of both bodies plus the spring energy."""
    xr, vr, xh, vh = state
    energy = 0.5 * cfg.robot_mass * vr * vr + 0.5 * cfg.stiffness * max(xr - xh, 0.0) ** 2
    if not is_infinite(cfg.human_mass):
        energy += 0.5 * cfg.human_mass * vh * vh  # type: ignore[operator]
    return float(energy)


class _ExactPropagator:
    """Matrix exponentials of the linear dynamics for each (contact, robot-free) mode."""

    def __init__(self, cfg: ImpactConfig) -> None:
        self.cfg = cfg
        self.force_row = np.array([cfg.stiffness, cfg.damping, -cfg.stiffness, -cfg.damping])
        self._step_cache: Dict[Tuple[bool, bool], np.ndarray] = {}

    def matrix(self, mode: _Mode) -> np.ndarray:
        a = np.zeros((4, 4))
        a[0, 1] = 1.0
        a[2, 3] = 1.0
        if mode.in_contact:
            if mode.robot_free:
                a[1] = -self.force_row / self.cfg.robot_mass
            if not is_infinite(self.cfg.human_mass):
                a[3] = self.force_row / self.cfg.human_mass  # type: ignore[operator]
        return a

    def step(self, mode: _Mode, state: np.ndarray, tau: float) -> np.ndarray:
        if tau == self.cfg.dt:
            key = (mode.in_contact, mode.robot_free)
            if key not in self._step_cache:
                self._step_cache[key] = expm(self.matrix(mode) * self.cfg.dt)
            return self._step_cache[key] @ state
        return expm(self.matrix(mode) * tau) @ state


def _contact_force(cfg: ImpactConfig, mode: _Mode, state: np.ndarray) -> float:
    if not mode.in_contact:
        return 0.0
    penetration = state[0] - state[2]
    rate = state[1] - state[3]
    return max(cfg.stiffness * penetration + cfg.damping * rate, 0.0)


def _integrate_exact(cfg: ImpactConfig, samples: int) -> Tuple[np.ndarray, np.ndarray, List[Tuple[float, str]]]:
    propagator = _ExactPropagator(cfg)
    row = propagator.force_row
    state = np.array([0.0, cfg.robot_velocity, 0.0, 0.0])
    mode = _Mode(in_contact=cfg.robot_velocity > 0)
    events: List[Tuple[float, str]] = []
    states = np.empty((samples, 4))
    forces = np.empty(samples)
    states[0] = state
    forces[0] = _contact_force(cfg, mode, state)

    def locate(g: Callable[[np.ndarray], float], tau_max: float, start: np.ndarray) -> float:
        return brentq(lambda tau: g(propagator.step(mode, start, tau)), 0.0, tau_max, xtol=1e-15)

    t = 0.0
    for index in range(1, samples):
        remaining = cfg.dt
        while remaining > 0:
            end = propagator.step(mode, state, remaining)
            candidates: List[Tuple[float, str]] = []
            if mode.retract_at is not None and not mode.retracting and mode.retract_at - t <= remaining:
                candidates.append((max(mode.retract_at - t, 0.0), "retract"))
            if mode.in_contact:
                if float(row @ state) < 0:
                    # a kinematic retraction can pull the damper into tension at once
                    candidates.append((0.0, "contact_end"))
                elif float(row @ end) < 0:
                    candidates.append((locate(lambda s: float(row @ s), remaining, state), "contact_end"))
                if cfg.clamp_hold and mode.robot_free and not mode.held and state[1] > 0 >= end[1]:
                    candidates.append((locate(lambda s: float(s[1]), remaining, state), "hold"))
                if cfg.detection_force is not None and not mode.detected:
                    g0 = float(row @ state) - cfg.detection_force
                    if g0 < 0 <= float(row @ end) - cfg.detection_force:
                        candidates.append(
                            (locate(lambda s: float(row @ s) - cfg.detection_force, remaining, state), "detect")
                        )
            elif state[0] - state[2] <= 0 < end[0] - end[2]:
                candidates.append((locate(lambda s: float(s[0] - s[2]), remaining, state), "contact_start"))

            if not candidates:
                state = end
                t += remaining
                break

            tau, event = min(candidates)
            state = propagator.step(mode, state, tau) if tau > 0 else state
            t += tau
            remaining -= tau
            events.append((t, event))
            if event == "contact_end":
                mode.in_contact = False
            elif event == "contact_start":
                mode.in_contact = True
            elif event == "hold":
                mode.robot_free = False
                mode.held = True
                state = state.copy()
                state[1] = 0.0
            elif event == "detect":
                mode.detected = True
                mode.retract_at = t + cfg.reaction_delay
            elif event == "retract":
                mode.robot_free = False
                mode.retracting = True
                state = state.copy()
                state[1] = -cfg.retraction_velocity
        t = index * cfg.dt
        states[index] = state
        forces[index] = _contact_force(cfg, mode, state)
    return states, forces, events


def _integrate_symplectic(cfg: ImpactConfig, samples: int) -> Tuple[np.ndarray, np.ndarray, List[Tuple[float, str]]]:
    xr, vr, xh, vh = 0.0, cfg.robot_velocity, 0.0, 0.0
    mode = _Mode(in_contact=cfg.robot_velocity > 0)
    events: List[Tuple[float, str]] = []
    states = np.empty((samples, 4))
    forces = np.empty(samples)
    states[0] = (xr, vr, xh, vh)
    forces[0] = _contact_force(cfg, mode, states[0])
    human_free = not is_infinite(cfg.human_mass)

    for index in range(1, samples):
        t = index * cfg.dt
        mode.in_contact = xr - xh > 0 or (xr - xh == 0 and vr - vh > 0)
        force = _contact_force(cfg, mode, np.array([xr, vr, xh, vh]))
        if mode.robot_free:
            vr -= force / cfg.robot_mass * cfg.dt
            if cfg.clamp_hold and not mode.held and force > 0 and vr <= 0:
                vr, mode.robot_free, mode.held = 0.0, False, True
                events.append((t, "hold"))
        if human_free:
            vh += force / cfg.human_mass * cfg.dt  # type: ignore[operator]
        if cfg.detection_force is not None and not mode.detected and force >= cfg.detection_force:
            mode.detected = True
            mode.retract_at = t + cfg.reaction_delay
            events.append((t, "detect"))
        if mode.retract_at is not None and not mode.retracting and t >= mode.retract_at:
            mode.robot_free, mode.retracting = False, True
            vr = -cfg.retraction_velocity
            events.append((t, "retract"))
        xr += vr * cfg.dt
        xh += vh * cfg.dt
        states[index] = (xr, vr, xh, vh)
        mode.in_contact = xr - xh > 0
        forces[index] = _contact_force(cfg, mode, states[index])
    return states, forces, events


def run_simulation(cfg: ImpactConfig) -> SimulationRun:
    """Simulate and keep the sampled states and the event log alongside the trace."""
    samples = int(round(cfg.duration / cfg.dt)) + 1
    if cfg.integrator is Integrator.EXACT:
        states, forces, events = _integrate_exact(cfg, samples)
    else:
        states, forces, events = _integrate_symplectic(cfg, samples)
    for time, event in events:
        logger.debug("t=%.6g s: %s", time, event)
    times = np.arange(samples) * cfg.dt
    return SimulationRun(ForceTrace(times, forces, TraceSource.SIMULATED), states, events)


def simulate(cfg: ImpactConfig) -> ForceTrace:
    """Contact-force trace sampled every ``cfg.dt`` from contact onset to ``cfg.duration``."""
    return run_simulation(cfg).trace


__all__ = [
    "Integrator",
    "ImpactConfig",
    "SimulationRun",
    "DEFAULT_DT",
    "peak_force_analytic",
    "total_energy",
    "run_simulation",
    "simulate",
]
