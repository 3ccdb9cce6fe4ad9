"""
Contact-scenario taxonomy, the TS interpretation catalog and the risk-assessment
decision tree.

A scenario is described by its contact event type (constrained or
unconstrained) and its contact force phase (dynamic Phase I or quasi-static
Phase II). The TS labels "transient" and "quasi-static" mix both axes, so two of
the four combinations are ambiguous; the engine reports the conflict and never
resolves it on its own: the caller picks an interpretation.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Tuple

from .contact_model import (
    BodyPartParams,
    EffectiveMassSpec,
    HumanMassMode,
    RobotMassMode,
    contact_force,
    effective_mass_for,
    lookup_body_part,
    velocity_limit,
)
from .dynamics import ContactFrame, reflected_mass
from .errors import ContactModelError, PFLError, ScenarioError, UnsupportedInjuryMeasureError
from .robot_model import JointConfiguration, RobotModel
from .units import Mass, format_sig, is_infinite


logger = logging.getLogger(__name__)


class EventType(str, Enum):
    CONSTRAINED = "constrained"
    UNCONSTRAINED = "unconstrained"


class ForcePhase(str, Enum):
    PHASE_I_DYNAMIC = "phase_I_dynamic"
    PHASE_II_QUASISTATIC = "phase_II_quasistatic"


class Geometry(str, Enum):
    BLUNT = "blunt"
    SHARP = "sharp"


class Configuration(str, Enum):
    NON_SINGULAR = "non_singular"
    NEAR_SINGULAR = "near_singular"
    AUTO_FROM_DYNAMICS = "auto_from_dynamics"


class InjuryMeasure(str, Enum):
    FORCE_PRESSURE = "force_pressure"
    ENERGY_DENSITY = "energy_density"
    COMPRESSION_CRITERION = "compression_criterion"
    AO_CLASSIFICATION = "ao_classification"


class TSLabel(str, Enum):
    TRANSIENT = "transient"
    QUASISTATIC = "quasistatic"
    CONFLICTING = "conflicting"


class Consistency(str, Enum):
    CONSISTENT = "consistent"
    CONFLICTING = "conflicting"


class Estimation(str, Enum):
    MODEL = "model"
    EXPERIMENTAL = "experimental"


class ThresholdKind(str, Enum):
    TRANSIENT = "transient"
    QUASISTATIC = "quasistatic"


class InterpretationId(str, Enum):
    A = "A"
    B1 = "B1"
    B2 = "B2"
    C = "C"
    D = "D"


class Verdict(str, Enum):
    SAFE = "safe"
    RISK_REDUCTION_REQUIRED = "risk_reduction_required"
    EXPERIMENTAL_VALIDATION_REQUIRED = "experimental_validation_required"


class InjuryKind(str, Enum):
    ABRASION = "abrasion"
    CONTUSION = "contusion"
    CUT = "cut"
    STAB = "stab"
    FRACTURE = "fracture"


@dataclass(frozen=True)
class ContactScenario:
    event_type: EventType
    force_phase: ForcePhase
    geometry: Geometry = Geometry.BLUNT
    configuration: Configuration = Configuration.NON_SINGULAR
    body_part: str = "hand"
    contact: Optional[ContactFrame] = None
    velocity: Optional[float] = None  # m/s
    position_label: Optional[str] = None
    joint_configuration: Optional[JointConfiguration] = None
    injury_measure: InjuryMeasure = InjuryMeasure.FORCE_PRESSURE

    def __post_init__(self) -> None:
        if self.velocity is not None and not (self.velocity >= 0 and math.isfinite(self.velocity)):
            raise ScenarioError(f"velocity must be a finite value >= 0, got {self.velocity}")

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "event_type": self.event_type.value,
            "force_phase": self.force_phase.value,
            "geometry": self.geometry.value,
            "configuration": self.configuration.value,
            "body_part": self.body_part,
            "velocity_m_s": self.velocity,
            "position_label": self.position_label,
            "injury_measure": self.injury_measure.value,
        }
        if self.contact is not None:
            data["contact"] = {
                "point_m": list(self.contact.point),
                "direction": list(self.contact.direction),
                "link": self.contact.attached_link,
            }
        if self.joint_configuration is not None:
            data["joint_configuration"] = list(self.joint_configuration.q)
        return data


@dataclass(frozen=True)
class Interpretation:
    id: InterpretationId
    mass_spec: Optional[EffectiveMassSpec]
    estimation: Estimation
    threshold_kind: ThresholdKind
    description: str = ""


@dataclass(frozen=True)
class AssessmentReport:
    scenario: ContactScenario
    interpretation: Interpretation
    ts_labels: FrozenSet[TSLabel]
    consistency: Consistency
    decision_path: Tuple[str, ...]
    predicted_force: Optional[float]  # None: requires experiment
    threshold_applied: float
    verdict: Verdict
    recommended_action: str
    effective_mass: Optional[Mass] = None
    velocity_limit: Optional[float] = None
    possible_injuries: Tuple[InjuryKind, ...] = field(default=())

    def to_dict(self) -> Dict[str, Any]:
        if self.predicted_force is None:
            predicted: Any = "requires experiment"
        elif math.isinf(self.predicted_force):
            predicted = "unbounded"
        else:
            predicted = self.predicted_force
        mu: Any = self.effective_mass
        if mu is not None and is_infinite(mu):
            mu = "unbounded"
        return {
            "scenario": self.scenario.to_dict(),
            "interpretation": self.interpretation.id.value,
            "ts_labels": sorted(label.value for label in self.ts_labels),
            "consistency": self.consistency.value,
            "decision_path": list(self.decision_path),
            "predicted_force_N": predicted,
            "threshold_applied_N": self.threshold_applied,
            "effective_mass_kg": mu,
            "velocity_limit_m_s": self.velocity_limit,
            "verdict": self.verdict.value,
            "recommended_action": self.recommended_action,
            "possible_injuries": [kind.value for kind in self.possible_injuries],
        }


# ----- Taxonomy -----


_CLASSIFICATION: Dict[Tuple[EventType, ForcePhase], Tuple[FrozenSet[TSLabel], Consistency]] = {
    (EventType.UNCONSTRAINED, ForcePhase.PHASE_I_DYNAMIC): (frozenset({TSLabel.TRANSIENT}), Consistency.CONSISTENT),
    (EventType.CONSTRAINED, ForcePhase.PHASE_II_QUASISTATIC): (frozenset({TSLabel.QUASISTATIC}), Consistency.CONSISTENT),
    (EventType.CONSTRAINED, ForcePhase.PHASE_I_DYNAMIC): (
        frozenset({TSLabel.TRANSIENT, TSLabel.QUASISTATIC}),
        Consistency.CONFLICTING,
    ),
    (EventType.UNCONSTRAINED, ForcePhase.PHASE_II_QUASISTATIC): (
        frozenset({TSLabel.TRANSIENT, TSLabel.QUASISTATIC}),
        Consistency.CONFLICTING,
    ),
}


def classify_scenario(event_type: EventType, force_phase: ForcePhase) -> Tuple[FrozenSet[TSLabel], Consistency]:
    """TS labels applicable to an (event type, force phase) pair and whether they agree."""
    return _CLASSIFICATION[(EventType(event_type), ForcePhase(force_phase))]


def possible_injuries(scenario: ContactScenario) -> Tuple[InjuryKind, ...]:
    """Injury kinds to consider for the contact subclass, mildest first."""
    constrained = scenario.event_type is EventType.CONSTRAINED
    quasistatic = scenario.force_phase is ForcePhase.PHASE_II_QUASISTATIC
    if scenario.geometry is Geometry.SHARP:
        if not quasistatic:
            return (InjuryKind.ABRASION,)
        return (InjuryKind.CUT, InjuryKind.STAB) if constrained else (InjuryKind.CUT,)
    if constrained and quasistatic:
        return (InjuryKind.CONTUSION, InjuryKind.FRACTURE)
    return (InjuryKind.CONTUSION,)


_CATALOG: Tuple[Interpretation, ...] = (
    Interpretation(
        id=InterpretationId.A,
        mass_spec=EffectiveMassSpec(RobotMassMode.ISO_SIMPLIFIED, HumanMassMode.TS_VALUE),
        estimation=Estimation.MODEL,
        threshold_kind=ThresholdKind.TRANSIENT,
        description="transient; TS force model with TS robot mass, body-part mass and stiffness",
    ),
    Interpretation(
        id=InterpretationId.B1,
        mass_spec=EffectiveMassSpec(RobotMassMode.ISO_SIMPLIFIED, HumanMassMode.INFINITE),
        estimation=Estimation.MODEL,
        threshold_kind=ThresholdKind.TRANSIENT,
        description="transient; TS force model with TS robot mass, constrained body part (infinite mass)",
    ),
    Interpretation(
        id=InterpretationId.B2,
        mass_spec=EffectiveMassSpec(RobotMassMode.REFLECTED, HumanMassMode.INFINITE),
        estimation=Estimation.MODEL,
        threshold_kind=ThresholdKind.TRANSIENT,
        description="transient; TS force model with reflected robot mass, constrained body part",
    ),
    Interpretation(
        id=InterpretationId.C,
        mass_spec=None,
        estimation=Estimation.EXPERIMENTAL,
        threshold_kind=ThresholdKind.QUASISTATIC,
        description="constrained quasi-static; no TS model, experimental estimation, quasi-static threshold",
    ),
    Interpretation(
        id=InterpretationId.D,
        mass_spec=None,
        estimation=Estimation.EXPERIMENTAL,
        threshold_kind=ThresholdKind.TRANSIENT,
        description="constrained quasi-static; no TS model, experimental estimation, transient threshold",
    ),
)


def interpretation_catalog() -> List[Interpretation]:
    """The five interpretations A, B1, B2, C, D in that order."""
    return list(_CATALOG)


def get_interpretation(interpretation_id: str | InterpretationId) -> Interpretation:
    try:
        wanted = InterpretationId(str(getattr(interpretation_id, "value", interpretation_id)).upper())
    except ValueError:
        raise ScenarioError(f"unknown interpretation {interpretation_id!r}; expected A, B1, B2, C or D") from None
    return next(item for item in _CATALOG if item.id is wanted)


# ----- Decision tree -----


def _resolve_configuration(model: Optional[RobotModel], scenario: ContactScenario) -> Configuration:
    if scenario.configuration is not Configuration.AUTO_FROM_DYNAMICS:
        return scenario.configuration
    if model is None or scenario.contact is None or scenario.joint_configuration is None:
        raise ScenarioError("auto_from_dynamics needs a robot model, a contact frame and a joint configuration")
    mass = reflected_mass(model, scenario.joint_configuration, scenario.contact)
    return Configuration.NEAR_SINGULAR if is_infinite(mass) else Configuration.NON_SINGULAR


def assess(
    model: Optional[RobotModel],
    scenario: ContactScenario,
    interp: Interpretation,
    parts: Mapping[str, BodyPartParams] | List[BodyPartParams],
) -> AssessmentReport:
    """
    Walk the decision tree for one scenario under one interpretation.

    Order: event type, force phase, robot configuration (constrained and
    quasi-static only), geometry, injury measure, estimation, threshold.
    """
    if scenario.injury_measure is not InjuryMeasure.FORCE_PRESSURE:
        raise UnsupportedInjuryMeasureError(
            f"injury measure {scenario.injury_measure.value!r} is not directly supported by TS; use force_pressure"
        )
    try:
        part = lookup_body_part(scenario.body_part, parts)
    except ContactModelError as exc:
        raise ScenarioError(str(exc)) from None

    labels, consistency = classify_scenario(scenario.event_type, scenario.force_phase)
    ts_labels = labels | {TSLabel.CONFLICTING} if consistency is Consistency.CONFLICTING else labels
    threshold = part.threshold(quasistatic=interp.threshold_kind is ThresholdKind.QUASISTATIC)
    injuries = possible_injuries(scenario)

    path: List[str] = [
        f"event_type:{scenario.event_type.value}",
        f"force_phase:{scenario.force_phase.value}",
    ]

    def finish(
        verdict: Verdict,
        action: str,
        predicted: Optional[float] = None,
        mu: Optional[Mass] = None,
        limit: Optional[float] = None,
    ) -> AssessmentReport:
        path.append(f"verdict:{verdict.value}")
        logger.debug("Assessment %s under %s: %s", scenario.body_part, interp.id.value, " -> ".join(path))
        return AssessmentReport(
            scenario=scenario,
            interpretation=interp,
            ts_labels=frozenset(ts_labels),
            consistency=consistency,
            decision_path=tuple(path),
            predicted_force=predicted,
            threshold_applied=threshold,
            verdict=verdict,
            recommended_action=action,
            effective_mass=mu,
            velocity_limit=limit,
            possible_injuries=injuries,
        )

    if scenario.event_type is EventType.CONSTRAINED and scenario.force_phase is ForcePhase.PHASE_II_QUASISTATIC:
        configuration = _resolve_configuration(model, scenario)
        path.append(f"configuration:{configuration.value}")
        if configuration is Configuration.NEAR_SINGULAR:
            return finish(
                Verdict.RISK_REDUCTION_REQUIRED,
                "avoid clamping in near-singular robot configurations (re-plan the path or restrict the workspace)",
            )

    path.append(f"geometry:{scenario.geometry.value}")
    if scenario.geometry is Geometry.SHARP:
        return finish(
            Verdict.RISK_REDUCTION_REQUIRED,
            "eliminate sharp contact geometry (cover or round off edges and points)",
        )

    path.append(f"injury_measure:{scenario.injury_measure.value}")
    path.append(f"estimation:{interp.estimation.value}")
    if interp.estimation is Estimation.EXPERIMENTAL:
        path.append(f"threshold:{interp.threshold_kind.value}")
        return finish(
            Verdict.EXPERIMENTAL_VALIDATION_REQUIRED,
            f"measure the contact force experimentally and compare it with the "
            f"{interp.threshold_kind.value} limit of {format_sig(threshold)} N",
        )

    if scenario.velocity is None:
        raise ScenarioError(f"interpretation {interp.id.value} needs the robot velocity")
    if interp.mass_spec is None:  # pragma: no cover - catalog invariant
        raise ScenarioError(f"interpretation {interp.id.value} has no mass binding")
    if model is None:
        raise ScenarioError(f"interpretation {interp.id.value} needs a robot model")
    if interp.mass_spec.robot_mass_mode is RobotMassMode.REFLECTED and (
        scenario.contact is None or scenario.joint_configuration is None
    ):
        raise ScenarioError(f"interpretation {interp.id.value} needs a contact frame and a joint configuration")

    try:
        mu = effective_mass_for(model, part, interp.mass_spec, scenario.joint_configuration, scenario.contact)
    except PFLError as exc:
        raise ScenarioError(f"cannot evaluate the robot mass: {exc}") from None
    predicted = contact_force(scenario.velocity, mu, part.stiffness)
    limit = velocity_limit(threshold, mu, part.stiffness)

    path.append(f"threshold:{interp.threshold_kind.value}")
    # safe iff v <= limit; the recomputed force may round past the threshold at v == limit
    if scenario.velocity <= limit:
        return finish(
            Verdict.SAFE,
            f"none; predicted {format_sig(predicted)} N is within the {format_sig(threshold)} N limit",
            predicted,
            mu,
            limit,
        )
    if limit == 0.0:
        action = "avoid contact along this direction: the reflected mass is unbounded (near-singular)"
    else:
        action = f"reduce velocity to <= {format_sig(limit)} m/s"
    return finish(Verdict.RISK_REDUCTION_REQUIRED, action, predicted, mu, limit)


# ----- Scenario documents -----


_SCENARIO_KEYS = (
    "event_type",
    "force_phase",
    "geometry",
    "configuration",
    "body_part",
    "contact",
    "velocity_m_s",
    "position_label",
    "injury_measure",
    "robot",
    "interpretation",
    "joint_configuration",
)
_CONTACT_KEYS = ("point_m", "direction", "link")


@dataclass(frozen=True)
class ScenarioDocument:
    scenario: ContactScenario
    robot_path: Optional[str]
    interpretation: InterpretationId


def _enum(enum_type: type, raw: Any, key: str) -> Any:
    try:
        return enum_type(raw)
    except ValueError:
        allowed = ", ".join(item.value for item in enum_type)  # type: ignore[attr-defined]
        raise ScenarioError(f"{key}: expected one of {allowed}, got {raw!r}") from None


def _float_list(raw: Any, key: str, length: Optional[int] = None) -> List[float]:
    if not isinstance(raw, list) or (length is not None and len(raw) != length):
        size = f"{length} " if length is not None else ""
        raise ScenarioError(f"{key}: expected an array of {size}numbers")
    values = []
    for item in raw:
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ScenarioError(f"{key}: expected numbers")
        values.append(float(item))
    return values


def parse_scenario(text: str) -> ScenarioDocument:
    """Parse a scenario file (JSON) into a scenario, robot path and interpretation."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ScenarioError("scenario file must contain a JSON object")
    unknown = sorted(set(raw) - set(_SCENARIO_KEYS))
    if unknown:
        raise ScenarioError(f"unknown key(s): {', '.join(unknown)}")
    for key in ("event_type", "force_phase", "interpretation"):
        if key not in raw:
            raise ScenarioError(f"{key}: missing required key")

    contact = None
    if raw.get("contact") is not None:
        contact_raw = raw["contact"]
        if not isinstance(contact_raw, dict) or set(contact_raw) != set(_CONTACT_KEYS):
            raise ScenarioError("contact: expected an object with point_m, direction and link")
        try:
            contact = ContactFrame.create(
                _float_list(contact_raw["point_m"], "contact.point_m", 3),
                _float_list(contact_raw["direction"], "contact.direction", 3),
                str(contact_raw["link"]),
            )
        except PFLError as exc:
            raise ScenarioError(f"contact: {exc}") from None

    joints = None
    if raw.get("joint_configuration") is not None:
        joints = JointConfiguration.of(_float_list(raw["joint_configuration"], "joint_configuration"))

    velocity = raw.get("velocity_m_s")
    if velocity is not None and (isinstance(velocity, bool) or not isinstance(velocity, (int, float))):
        raise ScenarioError("velocity_m_s: expected a number")

    scenario = ContactScenario(
        event_type=_enum(EventType, raw["event_type"], "event_type"),
        force_phase=_enum(ForcePhase, raw["force_phase"], "force_phase"),
        geometry=_enum(Geometry, raw.get("geometry", "blunt"), "geometry"),
        configuration=_enum(Configuration, raw.get("configuration", "non_singular"), "configuration"),
        body_part=str(raw.get("body_part", "hand")),
        contact=contact,
        velocity=None if velocity is None else float(velocity),
        position_label=raw.get("position_label"),
        joint_configuration=joints,
        injury_measure=_enum(InjuryMeasure, raw.get("injury_measure", "force_pressure"), "injury_measure"),
    )
    robot = raw.get("robot")
    if robot is not None and not isinstance(robot, str):
        raise ScenarioError("robot: expected a file path")
    return ScenarioDocument(
        scenario=scenario,
        robot_path=robot,
        interpretation=get_interpretation(str(raw["interpretation"])).id,
    )


def render_report(report: AssessmentReport) -> str:
    """Human-readable multi-line report."""
    scenario = report.scenario
    where = f" @ {scenario.position_label}" if scenario.position_label else ""
    labels = ", ".join(sorted(label.value for label in report.ts_labels if label is not TSLabel.CONFLICTING))
    if report.predicted_force is None:
        predicted = "requires experiment"
    elif math.isinf(report.predicted_force):
        predicted = "unbounded"
    else:
        predicted = f"{format_sig(report.predicted_force)} N"
    lines = [
        f"Scenario:        {scenario.event_type.value} / {scenario.force_phase.value} / "
        f"{scenario.geometry.value} / {scenario.body_part}{where}",
        f"TS labels:       {labels} ({report.consistency.value})",
        f"Interpretation:  {report.interpretation.id.value} ({report.interpretation.estimation.value}, "
        f"{report.interpretation.threshold_kind.value} threshold)",
        f"Decision path:   {' -> '.join(report.decision_path)}",
        f"Predicted force: {predicted}",
        f"Threshold:       {format_sig(report.threshold_applied)} N",
    ]
    if report.velocity_limit is not None:
        lines.append(f"Velocity limit:  {format_sig(report.velocity_limit)} m/s")
    lines.extend(
        [
            f"Possible injury: {', '.join(kind.value for kind in report.possible_injuries)}",
            f"Verdict:         {report.verdict.value}",
            f"Action:          {report.recommended_action}",
        ]
    )
    return "\n".join(lines) + "\n"


__all__ = [
    "EventType",
    "ForcePhase",
    "Geometry",
    "Configuration",
    "InjuryMeasure",
    "TSLabel",
    "Consistency",
    "Estimation",
    "ThresholdKind",
    "InterpretationId",
    "Verdict",
    "InjuryKind",
    "ContactScenario",
    "Interpretation",
    "AssessmentReport",
    "ScenarioDocument",
    "classify_scenario",
    "possible_injuries",
    "interpretation_catalog",
    "get_interpretation",
    "assess",
    "parse_scenario",
    "render_report",
]
