from __future__ import annotations

import json
from pathlib import Path

import pytest

from pfl.errors import RobotParseError
from pfl.contact_model import iso_robot_mass
from pfl.robot_model import JointType, load_mass, load_robot, parse_robot, serialize_robot, total_moving_mass


DATA = Path(__file__).resolve().parents[1] / "data"


def _document(**overrides):
    link = {
        "name": "arm",
        "joint_type": "revolute",
        "joint_axis": [0, 0, 1],
        "origin_xyz_m": [1, 0, 0],
        "mass_kg": 2,
        "com_m": [1, 0, 0],
    }
    link.update(overrides)
    return {"name": "single", "links": [link]}


def test_minimal_document_has_one_dof():
    model = parse_robot(json.dumps(_document()))
    assert model.dof == 1
    assert model.links[0].joint_type is JointType.REVOLUTE
    assert model.links[0].mass == 2.0
    assert total_moving_mass(model) == 2.0


def test_negative_mass_names_the_field():
    with pytest.raises(RobotParseError) as info:
        parse_robot(json.dumps(_document(mass_kg=-1)))
    assert info.value.field == "links[0].mass_kg"
    assert "links[0].mass_kg" in str(info.value)


def test_syntax_error_reports_line_and_column():
    with pytest.raises(RobotParseError) as info:
        parse_robot('{\n  "name": "x",\n  "links": [\n}')
    assert info.value.line == 4
    assert info.value.column is not None
    assert str(info.value).startswith("line 4")


@pytest.mark.parametrize(
    "overrides, field",
    [
        ({"color": "red"}, "links[0].color"),
        ({"joint_axis": [0, 0, 2]}, "links[0].joint_axis"),
        ({"joint_type": "ball"}, "links[0].joint_type"),
        ({"inertia_kgm2": [-1, 0, 0, 0, 0, 0]}, "links[0].inertia_kgm2"),
        ({"com_m": [0, 0]}, "links[0].com_m"),
        ({"mass_kg": "heavy"}, "links[0].mass_kg"),
    ],
)
def test_semantic_errors_carry_field_path(overrides, field):
    with pytest.raises(RobotParseError) as info:
        parse_robot(json.dumps(_document(**overrides)))
    assert info.value.field == field


def test_unknown_top_level_key_rejected():
    document = _document()
    document["vendor"] = "acme"
    with pytest.raises(RobotParseError) as info:
        parse_robot(json.dumps(document))
    assert info.value.field == "vendor"


def test_missing_joint_axis_on_moving_joint():
    document = _document()
    del document["links"][0]["joint_axis"]
    with pytest.raises(RobotParseError) as info:
        parse_robot(json.dumps(document))
    assert info.value.field == "links[0].joint_axis"


def test_duplicate_link_names_rejected():
    document = _document()
    document["links"].append(dict(document["links"][0]))
    with pytest.raises(RobotParseError, match="duplicate link name"):
        parse_robot(json.dumps(document))


def test_explicit_order_sorts_links():
    document = _document(order=1)
    document["links"].append(
        {"name": "base", "joint_type": "fixed", "mass_kg": 5, "order": 0}
    )
    model = parse_robot(json.dumps(document))
    assert model.link_names == ["base", "arm"]


def test_partial_order_rejected():
    document = _document(order=1)
    document["links"].append({"name": "base", "joint_type": "fixed", "mass_kg": 5})
    with pytest.raises(RobotParseError, match="every link or for none"):
        parse_robot(json.dumps(document))


def test_fixed_base_excluded_from_moving_mass():
    document = {
        "name": "three",
        "links": [
            {"name": "base", "joint_type": "fixed", "mass_kg": 5},
            {"name": "a", "joint_type": "revolute", "joint_axis": [0, 0, 1], "mass_kg": 3},
            {"name": "b", "joint_type": "revolute", "joint_axis": [0, 1, 0], "mass_kg": 4},
        ],
    }
    model = parse_robot(json.dumps(document))
    assert model.dof == 2
    assert total_moving_mass(model) == 7.0


def test_fe_fixture_moving_mass_is_sum_of_link_masses():
    model = load_robot(DATA / "robots" / "fe.json")
    assert model.dof == 7
    assert load_mass(model) == 0.0
    moving = [link.mass for link in model.links if link.is_moving]
    assert total_moving_mass(model) == pytest.approx(sum(moving))
    assert iso_robot_mass(total_moving_mass(model), load_mass(model)) == pytest.approx(5.54, abs=1e-9)


def test_tm5_fixture_reproduces_listed_robot_mass():
    model = load_robot(DATA / "robots" / "tm5.json")
    assert total_moving_mass(model) == pytest.approx(21.5)
    assert load_mass(model) == pytest.approx(0.6)
    assert iso_robot_mass(total_moving_mass(model), load_mass(model)) == pytest.approx(11.35)


@pytest.mark.parametrize("name", ["ur10e", "fe", "lwr14", "tm5", "planar2"])
def test_serialize_parse_round_trip(name):
    model = load_robot(DATA / "robots" / f"{name}.json")
    again = parse_robot(serialize_robot(model))
    assert again == model
    assert serialize_robot(again) == serialize_robot(model)


def test_reference_positions_parsed():
    model = load_robot(DATA / "robots" / "ur10e.json")
    assert set(model.reference_positions) == {"C", "N"}
    assert all(len(xyz) == 3 for xyz in model.reference_positions.values())
