"""
PFL risk assessment - command line front end.

Run:
    python cli.py assess --scenario data/scenarios/b1_hand_ur10e.json
    python cli.py limit-velocity --f-max 280 --mu 0.5686 --k-nmm 75
    python cli.py cost --positions 3 --parts 2 --per-config 0.87

Exit codes: 0 success / safe, 1 assessment failure (not safe, threshold
exceeded, validation still required or a map without any safe grid
velocity), 2 usage or input error.
Numbers are printed with 6 significant digits; ``--json`` switches every
subcommand to machine-readable output.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from pfl.ccfm import (
    ExportFormat,
    MapSource,
    export_map,
    generate_map,
    lookup_max_velocity,
    parse_map_csv,
)
from pfl.config import get_settings
from pfl.contact_model import (
    DeviationBand,
    RobotMassMode,
    body_part_table,
    contact_force,
    effective_mass,
    lookup_body_part,
    velocity_limit,
)
from pfl.cost import CostParams, cost_breakdown, cost_per_configuration, cost_total, working_days
from pfl.dynamics import ContactFrame
from pfl.errors import PFLError
from pfl.experiments import ReplayReference, replay
from pfl.impact_sim import DEFAULT_DT, ImpactConfig, Integrator, peak_force_analytic, run_simulation
from pfl.risk_engine import (
    AssessmentReport,
    Configuration,
    ContactScenario,
    EventType,
    ForcePhase,
    Geometry,
    InjuryMeasure,
    InterpretationId,
    Verdict,
    assess,
    get_interpretation,
    render_report,
)
from pfl.robot_model import JointConfiguration, load_robot
from pfl.trace import evaluate_trace, format_trace, parse_trace
from pfl.units import INFINITE, Mass, format_sig, n_per_mm_to_n_per_m

from pipeline import build_assessment, load_map_positions, robot_info


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

InputFn = Callable[[str], str]


@dataclass
class CommandResult:
    exit_code: int
    stdout: str
    artifacts: List[str] = field(default_factory=list)
    stderr: str = ""


class _ParserExit(Exception):
    def __init__(self, status: int, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.message = message


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports instead of exiting the process."""

    def print_help(self, file: Any = None) -> None:
        raise _ParserExit(EXIT_OK, self.format_help())

    def exit(self, status: int = 0, message: Optional[str] = None) -> None:  # type: ignore[override]
        raise _ParserExit(status, message or "")

    def error(self, message: str) -> None:  # type: ignore[override]
        raise _ParserExit(EXIT_USAGE, f"{self.format_usage()}{self.prog}: error: {message}\n")


# ----- Output helpers -----


def _jsonable(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        if math.isinf(value):
            return "unbounded"
        return float(format_sig(value))
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if hasattr(value, "value"):  # enums
        return value.value
    return str(value)


def _dump(data: Dict[str, Any]) -> str:
    return json.dumps(_jsonable(data), indent=2) + "\n"


def _mass_arg(raw: str) -> Mass:
    if raw.strip().lower() in ("inf", "infinite", "unbounded"):
        return INFINITE
    value = float(raw)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"mass must be > 0 or 'inf', got {raw}")
    return value


def _float_list(raw: str) -> List[float]:
    try:
        return [float(item) for item in raw.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {raw!r}") from None


def _mu_from(args: argparse.Namespace) -> Mass:
    if args.mu is not None:
        return args.mu
    if args.robot_mass is None:
        raise PFLError("give --mu or --robot-mass (and optionally --human-mass)")
    return effective_mass(args.robot_mass, args.human_mass)


def _write(path: str, text: str, artifacts: List[str]) -> None:
    Path(path).write_text(text, encoding="utf-8")
    artifacts.append(path)


# ----- Subcommands -----


def _cmd_assess(args: argparse.Namespace, input_fn: InputFn) -> CommandResult:
    if args.interactive:
        report = _interactive_assessment(input_fn, args.parts)
    elif args.scenario:
        report = build_assessment(args.scenario, args.parts)
    else:
        raise PFLError("assess needs --scenario PATH or --interactive")
    code = EXIT_OK if report.verdict is Verdict.SAFE else EXIT_FAIL
    return CommandResult(code, _dump(report.to_dict()) if args.json else render_report(report))


def _ask_choice(input_fn: InputFn, question: str, options: Sequence[str], default: Optional[str] = None) -> str:
    hint = "/".join(options) if default is None else f"{'/'.join(options)}; default {default}"
    answer = input_fn(f"{question} [{hint}]: ").strip()
    if not answer and default is not None:
        return default
    for option in options:
        if answer.lower() == option.lower():
            return option
    raise PFLError(f"answer {answer!r} is not one of {', '.join(options)}")


def _answer_numbers(input_fn: InputFn, prompt: str) -> List[float]:
    try:
        return _float_list(input_fn(prompt))
    except argparse.ArgumentTypeError as exc:
        raise PFLError(str(exc)) from None


def _interactive_assessment(input_fn: InputFn, parts_path: Optional[str]) -> AssessmentReport:
    """Walk the decision tree question by question."""
    event = EventType(_ask_choice(input_fn, "Can the body part recoil freely?", ["unconstrained", "constrained"]))
    phase = ForcePhase(
        _ask_choice(input_fn, "Which contact force phase?", [p.value for p in ForcePhase])
    )
    configuration = Configuration.NON_SINGULAR
    if event is EventType.CONSTRAINED and phase is ForcePhase.PHASE_II_QUASISTATIC:
        configuration = Configuration(
            _ask_choice(input_fn, "Robot configuration at the clamp?", ["non_singular", "near_singular"])
        )
    geometry = Geometry(_ask_choice(input_fn, "Contact geometry?", [g.value for g in Geometry]))
    measure = InjuryMeasure(
        _ask_choice(
            input_fn, "Injury measure?", [m.value for m in InjuryMeasure], default=InjuryMeasure.FORCE_PRESSURE.value
        )
    )
    parts = body_part_table(parts_path)
    body_part = lookup_body_part(input_fn("Body part: ").strip(), parts).name
    interp = get_interpretation(_ask_choice(input_fn, "Interpretation?", [i.value for i in InterpretationId]))

    model = None
    velocity = None
    q = None
    contact = None
    if interp.mass_spec is not None:
        velocity = float(input_fn("Robot velocity [m/s]: "))
        model = load_robot(input_fn("Robot description file: ").strip())
        if interp.mass_spec.robot_mass_mode is RobotMassMode.REFLECTED:
            q = JointConfiguration.of(_answer_numbers(input_fn, "Joint configuration (comma separated) [rad]: "))
            point = _answer_numbers(input_fn, "Contact point x,y,z [m]: ")
            direction = _answer_numbers(input_fn, "Contact direction x,y,z: ")
            link = input_fn("Contact link: ").strip()
            contact = ContactFrame.create(point, direction, link)
    scenario = ContactScenario(
        event_type=event,
        force_phase=phase,
        geometry=geometry,
        configuration=configuration,
        body_part=body_part,
        contact=contact,
        velocity=velocity,
        joint_configuration=q,
        injury_measure=measure,
    )
    return assess(model, scenario, interp, parts)


def _cmd_predict_force(args: argparse.Namespace, input_fn: InputFn) -> CommandResult:
    mu = _mu_from(args)
    k = n_per_mm_to_n_per_m(args.k_nmm)
    force = contact_force(args.velocity, mu, k)
    exceeded = args.f_max is not None and force > args.f_max
    code = EXIT_FAIL if exceeded else EXIT_OK
    if args.json:
        return CommandResult(
            code,
            _dump({"velocity_m_s": args.velocity, "mu_kg": mu, "stiffness_N_per_mm": args.k_nmm,
                   "force_N": force, "f_max_N": args.f_max, "exceeded": exceeded}),
        )
    text = "unbounded" if math.isinf(force) else f"{format_sig(force)} N"
    lines = [text]
    if args.f_max is not None:
        lines.append(f"limit {format_sig(args.f_max)} N: {'exceeded' if exceeded else 'ok'}")
    return CommandResult(code, "\n".join(lines) + "\n")


def _cmd_limit_velocity(args: argparse.Namespace, input_fn: InputFn) -> CommandResult:
    mu = _mu_from(args)
    limit = velocity_limit(args.f_max, mu, n_per_mm_to_n_per_m(args.k_nmm))
    if args.json:
        return CommandResult(
            EXIT_OK,
            _dump({"f_max_N": args.f_max, "mu_kg": mu, "stiffness_N_per_mm": args.k_nmm, "velocity_limit_m_s": limit}),
        )
    return CommandResult(EXIT_OK, f"{format_sig(limit)} m/s\n")


def _cmd_analyze_trace(args: argparse.Namespace, input_fn: InputFn) -> CommandResult:
    trace = parse_trace(Path(args.trace).read_text(encoding="utf-8"))
    part = lookup_body_part(args.body_part, body_part_table(args.parts))
    verdict = evaluate_trace(trace, part, args.phase_boundary, args.contact_end)
    code = EXIT_OK if verdict.passed else EXIT_FAIL
    if args.json:
        return CommandResult(code, _dump({"body_part": part.name, **verdict.to_dict()}))
    plateau = "none" if verdict.quasistatic_force is None else f"{format_sig(verdict.quasistatic_force)} N"
    qs_pass = "n/a" if verdict.quasistatic_pass is None else ("pass" if verdict.quasistatic_pass else "fail")
    lines = [
        f"Body part:        {part.name}",
        f"Peak force:       {format_sig(verdict.peak_force)} N at {format_sig(verdict.peak_time)} s "
        f"(limit {format_sig(part.transient_force_limit)} N: {'pass' if verdict.transient_pass else 'fail'})",
        f"Quasi-static:     {plateau} (limit {format_sig(part.quasistatic_force_limit)} N: {qs_pass})",
        f"Result:           {'pass' if verdict.passed else 'fail'}",
    ]
    return CommandResult(code, "\n".join(lines) + "\n")


def _cmd_simulate(args: argparse.Namespace, input_fn: InputFn) -> CommandResult:
    cfg = ImpactConfig(
        robot_mass=args.robot_mass,
        robot_velocity=args.velocity,
        stiffness=n_per_mm_to_n_per_m(args.k_nmm),
        human_mass=args.human_mass,
        damping=args.damping,
        detection_force=args.detect_force,
        reaction_delay=args.reaction_delay,
        retraction_velocity=args.retract_velocity,
        duration=args.duration,
        dt=args.dt,
        clamp_hold=args.clamp_hold,
        integrator=Integrator(args.integrator),
    )
    sim = run_simulation(cfg)
    trace = sim.trace
    artifacts: List[str] = []
    if args.out:
        _write(args.out, format_trace(trace), artifacts)

    peak_index = int(trace.forces.argmax())
    data: Dict[str, Any] = {
        "mu_kg": cfg.mu,
        "peak_force_N": float(trace.forces[peak_index]),
        "peak_time_s": float(trace.times[peak_index]),
        "samples": len(trace),
        "events": [{"time_s": t, "event": name} for t, name in sim.events],
    }
    if args.damping == 0 and args.detect_force is None:
        data["analytic_peak_force_N"] = peak_force_analytic(cfg)

    code = EXIT_OK
    if args.body_part:
        part = lookup_body_part(args.body_part, body_part_table(args.parts))
        verdict = evaluate_trace(trace, part)
        data["verdict"] = {"body_part": part.name, **verdict.to_dict()}
        code = EXIT_OK if verdict.passed else EXIT_FAIL

    if args.json:
        return CommandResult(code, _dump(data), artifacts)
    lines = [
        f"Effective mass:   {format_sig(cfg.mu)} kg",
        f"Peak force:       {format_sig(data['peak_force_N'])} N at {format_sig(data['peak_time_s'])} s",
    ]
    if "analytic_peak_force_N" in data:
        lines.append(f"Analytic peak:    {format_sig(data['analytic_peak_force_N'])} N")
    for t, name in sim.events:
        lines.append(f"Event:            {name} at {format_sig(t)} s")
    if "verdict" in data:
        lines.append(f"Result:           {'pass' if data['verdict']['passed'] else 'fail'} ({data['verdict']['body_part']})")
    if args.out:
        lines.append(f"Trace written to {args.out}")
    return CommandResult(code, "\n".join(lines) + "\n", artifacts)


def _velocity_grid(args: argparse.Namespace) -> List[float]:
    if args.vstep <= 0 or args.vmax < args.vmin:
        raise PFLError("velocity grid needs vstep > 0 and vmax >= vmin")
    count = int(math.floor((args.vmax - args.vmin) / args.vstep + 1e-9)) + 1
    return [round(args.vmin + i * args.vstep, 10) for i in range(count)]


def _cmd_ccfm(args: argparse.Namespace, input_fn: InputFn) -> CommandResult:
    parts = body_part_table(args.parts)
    part = lookup_body_part(args.body_part, parts)
    source = MapSource(args.source)
    if source is MapSource.MEASURED_IMPORT:
        if not args.input:
            raise PFLError("measured-import needs --input CSV")
        robot_name = Path(args.robot).stem if args.robot else "imported"
        grid = parse_map_csv(Path(args.input).read_text(encoding="utf-8"), robot_name, part.name)
    else:
        if not args.robot:
            raise PFLError(f"source {source.value} needs --robot")
        model = load_robot(args.robot)
        grid = generate_map(
            model,
            part,
            load_map_positions(args.positions, model),
            _velocity_grid(args),
            source,
            sim_robot_mass=RobotMassMode(args.sim_robot_mass),
            workers=args.workers,
        )

    threshold = args.threshold if args.threshold is not None else part.transient_force_limit
    limits = {label: lookup_max_velocity(grid, threshold, label) for label in grid.labels}
    code = EXIT_FAIL if all(allowed is None for allowed in limits.values()) else EXIT_OK
    artifacts: List[str] = []
    csv_text = export_map(grid, ExportFormat.CSV)
    if args.out:
        _write(args.out, csv_text, artifacts)
    if args.svg:
        if grid.transient_limit is None:
            grid = replace(
                grid,
                transient_limit=part.transient_force_limit,
                quasistatic_limit=part.quasistatic_force_limit,
            )
        _write(args.svg, export_map(grid, ExportFormat.SVG), artifacts)

    if args.json:
        data = {
            "robot": grid.robot,
            "body_part": grid.body_part,
            "source": grid.source.value,
            "threshold_N": threshold,
            "velocities_m_s": grid.velocities.tolist(),
            "positions": [
                {"label": label, "forces_N": grid.row(label).tolist(), "max_velocity_m_s": limits[label]}
                for label in grid.labels
            ],
        }
        return CommandResult(code, _dump(data), artifacts)
    if not args.out and not args.svg:
        return CommandResult(code, csv_text, artifacts)
    lines = [f"Map {grid.robot} / {grid.body_part} ({grid.source.value}), limit {format_sig(threshold)} N"]
    for label in grid.labels:
        allowed = limits[label]
        lines.append(f"  {label}: " + ("no grid velocity is safe" if allowed is None else f"<= {format_sig(allowed)} m/s"))
    lines.extend(f"Written {path}" for path in artifacts)
    return CommandResult(code, "\n".join(lines) + "\n", artifacts)


def _cmd_cost(args: argparse.Namespace, input_fn: InputFn) -> CommandResult:
    params = CostParams(
        setup_h=args.setup,
        adjust_h=args.adjust,
        repeat_h=args.repeat,
        repeats=args.repeats,
        trials=args.trials,
    )
    per_config = cost_per_configuration(params) if args.per_config is None else args.per_config
    total = cost_total(params, args.positions, args.parts, args.per_config)
    if args.json:
        return CommandResult(
            EXIT_OK,
            _dump({
                "positions": args.positions,
                "body_parts": args.parts,
                "per_configuration_h": per_config,
                "breakdown_h": cost_breakdown(params) if args.per_config is None else None,
                "total_h": total,
                "working_days": working_days(total),
            }),
        )
    return CommandResult(EXIT_OK, f"{total:.2f} h\n")


def _cmd_robot_info(args: argparse.Namespace, input_fn: InputFn) -> CommandResult:
    model = load_robot(args.robot)
    info = robot_info(model, q=args.q, contact_link=args.link)
    if args.json:
        return CommandResult(EXIT_OK, _dump(info))
    iso = info["iso_robot_mass_kg"]
    lines = [
        f"Robot:              {info['name']} ({info['dof']} DOF, {len(info['links'])} links)",
        f"Moving mass M:      {format_sig(info['total_moving_mass_kg'])} kg",
        f"Load m_L:           {format_sig(info['load_mass_kg'])} kg",
        f"Robot mass M/2+m_L: {'n/a' if iso is None else format_sig(iso) + ' kg'}",
    ]
    for label, xyz in info["reference_positions_m"].items():
        lines.append(f"Position {label}:         " + ", ".join(format_sig(v) for v in xyz) + " m")
    for label, mass in info.get("reflected_mass_kg", {}).items():
        text = mass if isinstance(mass, str) else f"{format_sig(mass)} kg"
        lines.append(f"Reflected mass {label}:   {text}")
    return CommandResult(EXIT_OK, "\n".join(lines) + "\n")


def _cmd_experiments(args: argparse.Namespace, input_fn: InputFn) -> CommandResult:
    rows = replay(reference=ReplayReference(args.reference))
    outside = [row for row in rows if row.band is not DeviationBand.CORRECT]
    code = EXIT_FAIL if outside else EXIT_OK
    if args.json:
        return CommandResult(code, _dump({"reference": args.reference, "rows": [row.to_dict() for row in rows]}))
    lines = []
    for row in rows:
        record = row.record
        agrees = "" if row.agrees_with_published_color else "  (published colour differs)"
        lines.append(
            f"{record.body_part:<5} {record.robot:<6} {record.interpretation.value:<3} {record.position}  "
            f"measured {format_sig(record.measured_force):>4} N  expected {format_sig(row.expected):>7} N  "  # type: ignore[arg-type]
            f"{row.band.value}{agrees}"
        )
    lines.append(f"{len(rows) - len(outside)}/{len(rows)} records within +-10 N")
    return CommandResult(code, "\n".join(lines) + "\n")


# ----- Parser -----


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pfl", description="Power and force limiting risk assessment")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING (default from PFL_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        command = sub.add_parser(name, help=help_text)
        command.add_argument("--json", action="store_true", help="machine-readable output")
        return command

    def add_mass_args(command: argparse.ArgumentParser) -> None:
        command.add_argument("--mu", type=float, help="effective mass [kg]")
        command.add_argument("--robot-mass", type=_mass_arg, help="robot mass [kg] (with --human-mass)")
        command.add_argument("--human-mass", type=_mass_arg, default=INFINITE, help="body-part mass [kg] or inf")
        command.add_argument("--k-nmm", type=float, required=True, help="body-part stiffness [N/mm]")

    p = add("assess", "walk the decision tree for a scenario file")
    p.add_argument("--scenario")
    p.add_argument("--parts", help="extra body-part data file")
    p.add_argument("--interactive", action="store_true")

    p = add("predict-force", "contact force v*sqrt(mu*k)")
    p.add_argument("--velocity", type=float, required=True, help="relative velocity [m/s]")
    p.add_argument("--f-max", type=float, help="force limit to check against [N]")
    add_mass_args(p)

    p = add("limit-velocity", "largest velocity that keeps the force at F_max")
    p.add_argument("--f-max", type=float, required=True, help="force limit [N]")
    add_mass_args(p)

    p = add("analyze-trace", "evaluate a measured force trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--body-part", required=True)
    p.add_argument("--parts")
    p.add_argument("--phase-boundary", type=float)
    p.add_argument("--contact-end", type=float)

    p = add("simulate", "simulate a robot/body-part collision")
    p.add_argument("--robot-mass", type=float, required=True)
    p.add_argument("--human-mass", type=_mass_arg, default=INFINITE)
    p.add_argument("--velocity", type=float, required=True)
    p.add_argument("--k-nmm", type=float, required=True)
    p.add_argument("--damping", type=float, default=0.0, help="[N*s/m]")
    p.add_argument("--detect-force", type=float)
    p.add_argument("--reaction-delay", type=float, default=0.0)
    p.add_argument("--retract-velocity", type=float, default=0.0)
    p.add_argument("--duration", type=float, default=0.05)
    p.add_argument("--dt", type=float, default=DEFAULT_DT)
    p.add_argument("--clamp-hold", action="store_true")
    p.add_argument("--integrator", choices=[i.value for i in Integrator], default=Integrator.EXACT.value)
    p.add_argument("--body-part", help="evaluate the trace against this body part")
    p.add_argument("--parts")
    p.add_argument("--out", help="write the trace CSV here")

    p = add("ccfm", "generate a constrained collision force map")
    p.add_argument("--robot")
    p.add_argument("--body-part", required=True)
    p.add_argument("--parts")
    p.add_argument("--positions", help="positions JSON (default: the robot's reference positions)")
    p.add_argument("--vmin", type=float, default=0.05)
    p.add_argument("--vmax", type=float, default=1.5)
    p.add_argument("--vstep", type=float, default=0.05)
    p.add_argument("--source", choices=[s.value for s in MapSource], default=MapSource.MODEL_B1.value)
    p.add_argument("--sim-robot-mass", choices=[m.value for m in RobotMassMode], default=RobotMassMode.REFLECTED.value)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--input", help="measured map CSV for measured-import")
    p.add_argument("--threshold", type=float, help="force limit for the velocity lookup [N]")
    p.add_argument("--out", help="write the map CSV here")
    p.add_argument("--svg", help="write the SVG heatmap here")

    p = add("cost", "time needed for experimental validation")
    p.add_argument("--positions", type=int, required=True)
    p.add_argument("--parts", type=int, required=True)
    p.add_argument("--per-config", type=float)
    defaults = CostParams()
    p.add_argument("--setup", type=float, default=defaults.setup_h)
    p.add_argument("--adjust", type=float, default=defaults.adjust_h)
    p.add_argument("--repeat", type=float, default=defaults.repeat_h)
    p.add_argument("--repeats", type=int, default=defaults.repeats)
    p.add_argument("--trials", type=int, default=defaults.trials)

    p = add("robot-info", "mass summary of a robot description")
    p.add_argument("--robot", required=True)
    p.add_argument("--q", type=_float_list, help="joint configuration, comma separated [rad]")
    p.add_argument("--link", help="contact link (default: last link)")

    p = add("experiments", "replay the published measurements through the deviation classifier")
    p.add_argument("--reference", choices=[r.value for r in ReplayReference], default=ReplayReference.THRESHOLD.value)
    return parser


_COMMANDS: Dict[str, Callable[[argparse.Namespace, InputFn], CommandResult]] = {
    "assess": _cmd_assess,
    "predict-force": _cmd_predict_force,
    "limit-velocity": _cmd_limit_velocity,
    "analyze-trace": _cmd_analyze_trace,
    "simulate": _cmd_simulate,
    "ccfm": _cmd_ccfm,
    "cost": _cmd_cost,
    "robot-info": _cmd_robot_info,
    "experiments": _cmd_experiments,
}


def _configure_logging(level: Optional[str]) -> None:
    name = (level or get_settings().log_level).upper()
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(getattr(logging, name, logging.WARNING))


def run(argv: Sequence[str], input_fn: InputFn = input) -> CommandResult:
    """Parse ``argv``, dispatch to the subcommand and collect its output."""
    try:
        args = build_parser().parse_args(list(argv))
    except _ParserExit as exc:
        if exc.status == EXIT_OK:
            return CommandResult(EXIT_OK, exc.message)
        return CommandResult(EXIT_USAGE, "", stderr=exc.message)

    try:
        _configure_logging(args.log_level)
        logger.debug("Running %s", args.command)
        return _COMMANDS[args.command](args, input_fn)
    except ValueError as exc:  # PFLError and malformed numbers
        return CommandResult(EXIT_USAGE, "", stderr=f"error: {exc}\n")
    except OSError as exc:
        return CommandResult(EXIT_USAGE, "", stderr=f"error: {exc.strerror}: {exc.filename}\n")


def main(argv: Optional[Sequence[str]] = None) -> None:
    result = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(result.stdout)
    sys.stderr.write(result.stderr)
    raise SystemExit(result.exit_code)


if __name__ == "__main__":
    main()
