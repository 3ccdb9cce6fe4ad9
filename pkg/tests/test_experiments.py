from __future__ import annotations

import json

import pytest

from pfl.contact_model import DeviationBand, builtin_body_parts, effective_mass, lookup_body_part, velocity_limit
from pfl.experiments import (
    ROBOT_MASSES,
    VELOCITY_LIMITS,
    ReplayReference,
    predicted_force,
    published_records,
    replay,
)
from pfl.risk_engine import InterpretationId


HAND = lookup_body_part("hand", builtin_body_parts())


def test_record_counts():
    records = published_records()
    assert len(records) == 36
    skipped = [record for record in records if not record.performed]
    assert len(skipped) == 8
    assert {(r.body_part, r.interpretation) for r in skipped} == {("hand", InterpretationId.A)}


def test_threshold_replay_reproduces_published_colours_but_two():
    rows = replay()
    assert len(rows) == 28
    disagreements = {
        (row.record.robot, row.record.body_part, row.record.interpretation.value, row.record.position)
        for row in rows
        if not row.agrees_with_published_color
    }
    assert disagreements == {("UR10e", "hand", "B1", "C"), ("FE", "back", "A", "C")}


def test_threshold_replay_correct_band():
    correct = [row for row in replay() if row.band is DeviationBand.CORRECT]
    assert {(row.record.robot, row.record.position, row.record.measured_force) for row in correct} == {
        ("FE", "C", 289.0),
        ("LWR", "N", 279.0),
    }


def test_predicted_replay():
    rows = replay(reference=ReplayReference.PREDICTED)
    assert len(rows) == 28
    ur10e = next(
        row
        for row in rows
        if row.record.robot == "UR10e" and row.record.body_part == "hand" and row.record.position == "C"
    )
    assert ur10e.expected == pytest.approx(252.8, abs=0.05)


def test_predicted_force_for_b2_uses_reflected_mass():
    record = next(r for r in published_records() if r.robot == "FE" and r.interpretation is InterpretationId.B2)
    part = lookup_body_part(record.body_part, builtin_body_parts())
    assert predicted_force(record, part) == pytest.approx(0.55 * (2.9 * part.stiffness) ** 0.5)


@pytest.mark.parametrize("robot", sorted(VELOCITY_LIMITS["hand"]))
def test_hand_velocity_limits_close_to_force_model(robot):
    iso = ROBOT_MASSES[robot]["iso"]
    masses = {"A": effective_mass(iso, HAND.effective_mass), "B1": iso}
    if ROBOT_MASSES[robot]["reflected"] is not None:
        masses["B2"] = ROBOT_MASSES[robot]["reflected"]
    for interp, listed in VELOCITY_LIMITS["hand"][robot].items():
        analytic = velocity_limit(HAND.transient_force_limit, masses[interp], HAND.stiffness)
        # listed values are rounded down below the analytic limit
        assert 0.9 * analytic <= listed <= analytic


def test_replay_rows_serialise_to_json():
    payload = json.dumps([row.to_dict() for row in replay()])
    first = json.loads(payload)[0]
    assert first["interpretation"] == "B1"
    assert first["band_color"] in {"green", "babyblue", "blue", "orange", "red"}
