from __future__ import annotations

import math
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from pfl.contact_model import builtin_body_parts, lookup_body_part, velocity_limit
from pfl.errors import TraceParseError
from pfl.impact_sim import ImpactConfig, simulate
from pfl.trace import ForceTrace, TraceSource, evaluate_trace, format_trace, parse_trace


TRACES = Path(__file__).resolve().parents[1] / "data" / "traces"
HAND = lookup_body_part("hand", builtin_body_parts())


def _constant(force: float, duration: float = 1.0, samples: int = 101) -> ForceTrace:
    times = np.linspace(0.0, duration, samples)
    return ForceTrace(times, np.full(samples, force))


# ----- parsing -----


def test_two_rows():
    trace = parse_trace("time_s,force_N\n0,0\n0.001,10\n")
    assert len(trace) == 2
    assert trace.samples == [(0.0, 0.0), (0.001, 10.0)]
    assert trace.source is TraceSource.MEASURED


def test_shuffled_timestamps_name_the_row():
    with pytest.raises(TraceParseError) as info:
        parse_trace("time_s,force_N\n0,0\n0.002,5\n0.001,3\n")
    assert info.value.row == 3
    assert str(info.value).startswith("row 3:")


def test_crlf_and_bom_accepted():
    trace = parse_trace("\ufefftime_s,force_N\r\n0,1\r\n0.5,2\r\n\r\n")
    assert len(trace) == 2


@pytest.mark.parametrize(
    "text, message",
    [
        ("t,f\n0,0\n1,1\n", "header"),
        ("time_s,force_N\n0,0\n1,abc\n", "row 2"),
        ("time_s,force_N\n0,0,0\n1,1\n", "row 1"),
        ("time_s,force_N\n0,0\n", "at least 2"),
        ("time_s,force_N\n0,0\n1,nan\n", "non-finite"),
    ],
)
def test_malformed_traces(text, message):
    with pytest.raises(TraceParseError, match=message):
        parse_trace(text)


def test_format_parse_round_trip_is_lossless():
    cfg = ImpactConfig(robot_mass=0.57, robot_velocity=1.0, stiffness=75000)
    trace = simulate(cfg)
    again = parse_trace(format_trace(trace), TraceSource.SIMULATED)
    assert np.array_equal(again.times, trace.times)
    assert np.array_equal(again.forces, trace.forces)
    assert format_trace(again) == format_trace(trace)


# ----- evaluation -----


def test_constant_force_trace():
    verdict = evaluate_trace(_constant(100.0), HAND)
    assert verdict.peak_force == 100.0
    assert verdict.quasistatic_force == pytest.approx(100.0)
    assert verdict.transient_pass is True
    assert verdict.quasistatic_pass is True
    assert verdict.passed


def test_short_trace_has_no_quasistatic_phase():
    verdict = evaluate_trace(_constant(100.0, duration=0.2), HAND)
    assert verdict.quasistatic_force is None
    assert verdict.quasistatic_pass is None
    assert verdict.to_dict()["quasistatic_force_N"] == "none"
    assert verdict.to_dict()["quasistatic_pass"] == "n/a"


def test_plateau_below_contact_end_is_no_contact():
    assert evaluate_trace(_constant(3.0), HAND).quasistatic_force is None
    assert evaluate_trace(_constant(3.0), HAND, contact_end=1.0).quasistatic_force == pytest.approx(3.0)


def test_clamp_fixture():
    trace = parse_trace((TRACES / "clamp_hand.csv").read_text(encoding="utf-8"))
    verdict = evaluate_trace(trace, HAND)
    assert verdict.peak_force == 300.0
    assert verdict.peak_time == pytest.approx(0.02)
    assert verdict.quasistatic_force == pytest.approx(120.0, abs=1.0)
    assert verdict.transient_pass is False
    assert verdict.quasistatic_pass is True
    assert not verdict.passed


def test_phase_boundary_from_environment(monkeypatch):
    monkeypatch.setenv("PFL_PHASE_BOUNDARY_S", "0.9")
    assert evaluate_trace(_constant(100.0), HAND).phase_boundary == 0.9
    assert evaluate_trace(_constant(100.0), HAND, phase_boundary=0.3).phase_boundary == 0.3


@pytest.mark.parametrize("limit", [250.0, 300.0, 350.0, 1000.0])
def test_transient_pass_monotone_in_limit(limit):
    trace = parse_trace((TRACES / "clamp_hand.csv").read_text(encoding="utf-8"))
    lower = evaluate_trace(trace, replace(HAND, transient_force_limit=limit))
    higher = evaluate_trace(trace, replace(HAND, transient_force_limit=limit + 50.0))
    assert not (lower.transient_pass and not higher.transient_pass)


# ----- simulator to verdict -----


def test_simulated_trace_survives_csv_and_keeps_its_peak():
    cfg = ImpactConfig(robot_mass=0.57, robot_velocity=1.0, stiffness=75000, duration=0.6, dt=1e-4)
    trace = simulate(cfg)
    verdict = evaluate_trace(parse_trace(format_trace(trace)), HAND)
    assert verdict.peak_force == float(trace.forces.max())


def test_retraction_run_has_no_quasistatic_phase():
    cfg = ImpactConfig(
        robot_mass=0.57,
        robot_velocity=1.0,
        stiffness=75000,
        detection_force=50.0,
        reaction_delay=0.05,
        retraction_velocity=0.2,
        clamp_hold=True,
        duration=0.6,
        dt=1e-4,
    )
    trace = simulate(cfg)
    verdict = evaluate_trace(parse_trace(format_trace(trace)), HAND)
    assert verdict.quasistatic_force is None
    assert verdict.quasistatic_pass is None
    assert trace.forces[trace.times >= 0.2].max() == 0.0


def test_clamped_run_at_velocity_limit_passes_transient_check():
    mu, k = 0.57, 75000.0
    v = velocity_limit(HAND.transient_force_limit, mu, k) * (1 - 1e-9)
    cfg = ImpactConfig(robot_mass=mu, robot_velocity=v, stiffness=k, clamp_hold=True, duration=0.6, dt=1e-4)
    dense = simulate(cfg)
    verdict = evaluate_trace(dense, HAND)
    assert verdict.transient_pass
    assert verdict.peak_force == pytest.approx(280.0, rel=1e-6)
    assert verdict.quasistatic_force is not None

    decimated = ForceTrace(dense.times[::10], dense.forces[::10], TraceSource.SIMULATED)
    coarse = evaluate_trace(decimated, HAND)
    assert coarse.peak_force == pytest.approx(verdict.peak_force, rel=0.01)
    assert coarse.quasistatic_force == pytest.approx(verdict.quasistatic_force, rel=0.005)
    assert math.isclose(coarse.phase_boundary, verdict.phase_boundary)
