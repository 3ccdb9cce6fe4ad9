from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import pytest

from pfl.contact_model import (
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
    lookup_body_part,
    parse_body_parts,
    robot_mass,
    velocity_limit,
)
from pfl.dynamics import ContactFrame
from pfl.errors import ContactModelError
from pfl.units import INFINITE


EXTRA_PARTS = Path(__file__).resolve().parents[1] / "data" / "body_parts" / "extra.json"


# ----- masses -----


@pytest.mark.parametrize(
    "M, m_L, expected",
    [(10.0, 0.0, 5.0), (21.5, 0.6, 11.35), (21.74, 0.0, 10.87)],
)
def test_iso_robot_mass(M, m_L, expected):
    assert iso_robot_mass(M, m_L) == pytest.approx(expected)


def test_iso_robot_mass_rejects_bad_input():
    with pytest.raises(ContactModelError):
        iso_robot_mass(0.0, 0.0)
    with pytest.raises(ContactModelError):
        iso_robot_mass(10.0, -1.0)


@pytest.mark.parametrize(
    "m_r, expected",
    [(10.87, 0.57), (5.54, 0.54), (6.75, 0.55), (11.35, 0.57)],
)
def test_hand_effective_masses_round_to_listed_values(m_r, expected):
    mu = effective_mass(m_r, 0.6)
    assert mu == pytest.approx(expected, abs=0.005)
    assert f"{mu:.2f}" == f"{expected:.2f}"


def test_effective_mass_with_infinite_partner():
    assert effective_mass(7.3, INFINITE) == 7.3
    assert effective_mass(INFINITE, 0.6) == 0.6
    assert effective_mass(INFINITE, INFINITE) is INFINITE
    assert effective_mass(10.87, 0.6) == pytest.approx(0.5686, abs=1e-4)


def test_effective_mass_rejects_non_positive():
    with pytest.raises(ContactModelError):
        effective_mass(0.0, 0.6)


# ----- force and velocity -----


def test_contact_force_examples():
    assert contact_force(0.0, 0.5686, 75000) == 0.0
    assert contact_force(1.0, 0.5686, 75000) == pytest.approx(206.5, abs=0.05)
    assert contact_force(0.28, 10.87, 75000) == pytest.approx(252.8, abs=0.05)


def test_contact_force_with_unbounded_mass():
    assert math.isinf(contact_force(0.1, INFINITE, 75000))
    assert contact_force(0.0, INFINITE, 75000) == 0.0


def test_contact_force_rejects_negative_velocity():
    with pytest.raises(ContactModelError):
        contact_force(-0.1, 1.0, 75000)


def test_velocity_limit_examples():
    assert velocity_limit(280, 0.5686, 75000) == pytest.approx(1.356, abs=5e-4)
    assert velocity_limit(280, 10.87, 75000) == pytest.approx(0.310, abs=5e-4)
    mu_back = 40 * 5.54 / (40 + 5.54)
    assert velocity_limit(420, mu_back, 35000) == pytest.approx(1.018, abs=1e-3)
    assert velocity_limit(280, INFINITE, 75000) == 0.0


def test_velocity_limit_inverts_contact_force():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        force = rng.uniform(10.0, 1000.0)
        mu = rng.uniform(0.1, 50.0)
        k = rng.uniform(1e3, 1e6)
        assert contact_force(velocity_limit(force, mu, k), mu, k) == pytest.approx(force, rel=1e-9)


def test_contact_force_monotone_in_velocity():
    forces = [contact_force(v, 2.0, 35000) for v in np.linspace(0, 1.5, 31)]
    assert all(b > a for a, b in zip(forces, forces[1:]))


# ----- deviation bands -----


@pytest.mark.parametrize(
    "measured, expected, band",
    [
        (289, 280, DeviationBand.CORRECT),
        (196, 420, DeviationBand.OVER_100),
        (427, 280, DeviationBand.UNDER_100),
        (290, 280, DeviationBand.CORRECT),
        (269.9, 280, DeviationBand.OVER_10),
        (180, 280, DeviationBand.OVER_10),
        (179.9, 280, DeviationBand.OVER_100),
        (380, 280, DeviationBand.UNDER_10),
        (380.1, 280, DeviationBand.UNDER_100),
    ],
)
def test_classify_force_deviation(measured, expected, band):
    assert classify_force_deviation(measured, expected) is band


def test_text_rule_wins_over_published_colour():
    # UR10e hand B1 C-position: coloured red in the published table, 36 N above the limit
    band = classify_force_deviation(316, 280)
    assert band is DeviationBand.UNDER_10
    assert band.color == "orange"


def test_band_colours():
    assert [band.color for band in DeviationBand] == ["green", "babyblue", "blue", "orange", "red"]


# ----- body parts -----


def test_builtin_hand_and_back():
    parts = builtin_body_parts()
    hand = lookup_body_part("hand", parts)
    back = lookup_body_part("Back", parts)
    assert hand.transient_force_limit == 280
    assert hand.quasistatic_force_limit == 140
    assert hand.stiffness == 75000
    assert hand.effective_mass == 0.6
    assert back.stiffness == 35000
    assert back.effective_mass == 40
    assert back.threshold(quasistatic=False) == 420


def test_quasistatic_factor():
    hand = lookup_body_part("hand", builtin_body_parts(0.25))
    assert hand.quasistatic_force_limit == pytest.approx(70.0)
    with pytest.raises(ContactModelError):
        builtin_body_parts(1.5)


def test_unknown_body_part():
    with pytest.raises(ContactModelError, match="unknown body part"):
        lookup_body_part("elbow", builtin_body_parts())


def test_body_part_invariants():
    with pytest.raises(ContactModelError, match="below"):
        BodyPartParams("odd", effective_mass=1.0, stiffness=1000.0, transient_force_limit=100.0, quasistatic_force_limit=200.0)
    with pytest.raises(ContactModelError):
        BodyPartParams("odd", effective_mass=0.0, stiffness=1000.0, transient_force_limit=100.0, quasistatic_force_limit=50.0)


def test_parse_body_parts_file():
    parts = {part.name: part for part in parse_body_parts(EXTRA_PARTS.read_text(encoding="utf-8"))}
    assert parts["shoulder"].stiffness == 35000
    assert parts["shoulder"].quasistatic_force_limit == 210
    assert parts["thigh"].quasistatic_force_limit == pytest.approx(220.0)
    assert parts["thigh"].damping == 250


@pytest.mark.parametrize(
    "text, message",
    [
        ("{", "line 1"),
        ("{}", "JSON array"),
        (json.dumps([{"name": "x", "mass": 1}]), "unknown key"),
        (json.dumps([{"name": "x", "effective_mass_kg": "a"}]), "expected a number"),
    ],
)
def test_parse_body_parts_errors(text, message):
    with pytest.raises(ContactModelError, match=message):
        parse_body_parts(text)


def test_body_part_table_merges_env_file(monkeypatch):
    monkeypatch.setenv("PFL_BODY_PARTS", str(EXTRA_PARTS))
    table = body_part_table()
    assert set(table) == {"hand", "back", "shoulder", "thigh"}


def test_body_part_table_file_overrides_builtin(tmp_path):
    override = tmp_path / "parts.json"
    override.write_text(
        json.dumps(
            [{"name": "hand", "effective_mass_kg": 0.6, "stiffness_n_per_mm": 75, "transient_force_limit_n": 300}]
        ),
        encoding="utf-8",
    )
    table = body_part_table(override)
    assert table["hand"].transient_force_limit == 300
    assert table["hand"].quasistatic_force_limit == 150


def test_body_part_table_respects_quasistatic_factor(monkeypatch):
    monkeypatch.setenv("PFL_QUASISTATIC_FACTOR", "0.4")
    assert body_part_table()["hand"].quasistatic_force_limit == pytest.approx(112.0)


# ----- interpretation mass binding -----


def test_robot_mass_iso(lumped_robot):
    assert robot_mass(lumped_robot(21.74), RobotMassMode.ISO_SIMPLIFIED) == pytest.approx(10.87)
    assert robot_mass(lumped_robot(21.5, adapter=0.6), RobotMassMode.ISO_SIMPLIFIED) == pytest.approx(11.35)


def test_robot_mass_reflected_needs_contact(point_arm):
    with pytest.raises(ContactModelError):
        robot_mass(point_arm, RobotMassMode.REFLECTED, [0.0])
    contact = ContactFrame.create((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), "link1")
    assert robot_mass(point_arm, RobotMassMode.REFLECTED, [0.0], contact) == pytest.approx(2.0)


def test_effective_mass_for_interpretations(lumped_robot):
    model = lumped_robot(21.74)
    hand = lookup_body_part("hand", builtin_body_parts())
    a = EffectiveMassSpec(RobotMassMode.ISO_SIMPLIFIED, HumanMassMode.TS_VALUE)
    b1 = EffectiveMassSpec(RobotMassMode.ISO_SIMPLIFIED, HumanMassMode.INFINITE)
    assert effective_mass_for(model, hand, a) == pytest.approx(0.5686, abs=1e-4)
    assert effective_mass_for(model, hand, b1) == pytest.approx(10.87)
