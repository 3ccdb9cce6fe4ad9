"""
Power-and-force-limiting risk assessment toolkit.

The modules below are re-exported here so callers (``pipeline.py``,
``cli.py`` and tests) can import from one place.
"""

from .ccfm import (
    CCFMGrid,
    ExportFormat,
    MapPosition,
    MapSource,
    default_velocity_grid,
    export_map,
    generate_map,
    lookup_max_velocity,
    parse_map_csv,
)
from .config import Settings, get_settings
from .contact_model import (
    BodyPartParams,
    DeviationBand,
    EffectiveMassSpec,
    HumanMassMode,
    RobotMassMode,
    body_part_table,
    builtin_body_parts,
    classify_force_deviation,
    contact_force,
    effective_mass,
    effective_mass_for,
    iso_robot_mass,
    load_body_parts,
    lookup_body_part,
    parse_body_parts,
    robot_mass,
    velocity_limit,
)
from .cost import CostParams, cost_breakdown, cost_per_configuration, cost_total, working_days
from .dynamics import (
    ContactFrame,
    MassMatrix,
    cartesian_mass_inverse,
    contact_jacobian,
    flange_pose,
    forward_kinematics,
    kinetic_energy,
    mass_matrix,
    reflected_mass,
)
from .errors import (
    ConfigError,
    ContactModelError,
    CostError,
    DynamicsError,
    ImpactConfigError,
    MapError,
    PFLError,
    RobotParseError,
    ScenarioError,
    TraceParseError,
    UnsupportedInjuryMeasureError,
)
from .experiments import ExperimentRecord, ReplayReference, ReplayRow, published_records, replay
from .impact_sim import ImpactConfig, Integrator, SimulationRun, peak_force_analytic, run_simulation, simulate
from .risk_engine import (
    AssessmentReport,
    ContactScenario,
    Interpretation,
    InterpretationId,
    Verdict,
    assess,
    classify_scenario,
    get_interpretation,
    interpretation_catalog,
    parse_scenario,
    possible_injuries,
    render_report,
)
from .robot_model import (
    JointConfiguration,
    JointType,
    LinkSpec,
    RobotModel,
    load_mass,
    load_robot,
    parse_robot,
    serialize_robot,
    total_moving_mass,
)
from .trace import ForceTrace, TraceVerdict, evaluate_trace, format_trace, parse_trace
from .units import INFINITE, Mass, format_sig, is_infinite


__all__ = [
    # robot model / dynamics
    "RobotModel",
    "LinkSpec",
    "JointType",
    "JointConfiguration",
    "parse_robot",
    "load_robot",
    "serialize_robot",
    "total_moving_mass",
    "load_mass",
    "ContactFrame",
    "MassMatrix",
    "forward_kinematics",
    "flange_pose",
    "contact_jacobian",
    "mass_matrix",
    "kinetic_energy",
    "cartesian_mass_inverse",
    "reflected_mass",
    # contact model
    "BodyPartParams",
    "DeviationBand",
    "EffectiveMassSpec",
    "RobotMassMode",
    "HumanMassMode",
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
    # risk engine
    "ContactScenario",
    "Interpretation",
    "InterpretationId",
    "AssessmentReport",
    "Verdict",
    "classify_scenario",
    "possible_injuries",
    "interpretation_catalog",
    "get_interpretation",
    "assess",
    "parse_scenario",
    "render_report",
    # traces and simulation
    "ForceTrace",
    "TraceVerdict",
    "parse_trace",
    "format_trace",
    "evaluate_trace",
    "ImpactConfig",
    "Integrator",
    "SimulationRun",
    "peak_force_analytic",
    "run_simulation",
    "simulate",
    # maps, experiments, cost
    "CCFMGrid",
    "MapPosition",
    "MapSource",
    "ExportFormat",
    "default_velocity_grid",
    "generate_map",
    "lookup_max_velocity",
    "export_map",
    "parse_map_csv",
    "ExperimentRecord",
    "ReplayReference",
    "ReplayRow",
    "published_records",
    "replay",
    "CostParams",
    "cost_breakdown",
    "cost_per_configuration",
    "cost_total",
    "working_days",
    # shared
    "Settings",
    "get_settings",
    "INFINITE",
    "Mass",
    "is_infinite",
    "format_sig",
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
