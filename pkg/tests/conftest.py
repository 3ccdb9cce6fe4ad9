"""Shared fixtures: hand-built chains, the shipped robot files and a clean environment."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Callable, Sequence

import pytest

from pfl.robot_model import JointType, LinkSpec, RobotModel, load_robot


ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"


@pytest.fixture(autouse=True)
def clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    """Tests never see PFL_* settings from the developer's shell or .env."""
    for name in list(os.environ):
        if name.startswith("PFL_"):
            monkeypatch.delenv(name, raising=False)


def _planar_chain(masses: Sequence[float], lengths: Sequence[float], com_fraction: float = 1.0) -> RobotModel:
    links = tuple(
        LinkSpec(
            name=f"link{i + 1}",
            joint_type=JointType.REVOLUTE,
            joint_axis=(0.0, 0.0, 1.0),
            origin_translation=(length, 0.0, 0.0),
            mass=mass,
            com=(com_fraction * length, 0.0, 0.0),
        )
        for i, (mass, length) in enumerate(zip(masses, lengths))
    )
    return RobotModel(name=f"planar{len(links)}-points", links=links)


@pytest.fixture
def planar_chain() -> Callable[..., RobotModel]:
    """Factory for planar revolute-z chains of point masses (zero inertia)."""
    return _planar_chain


@pytest.fixture
def point_arm() -> RobotModel:
    """One revolute-z link, 2 kg point mass at the tip, L = 1 m."""
    return _planar_chain([2.0], [1.0])


@pytest.fixture
def lumped_robot() -> Callable[..., RobotModel]:
    """Factory for a one-link robot whose moving mass M and load are given."""

    def make(total_mass: float, payload: float = 0.0, adapter: float = 0.0) -> RobotModel:
        model = _planar_chain([total_mass], [0.5], com_fraction=0.5)
        return RobotModel(
            name=f"lumped-{total_mass:g}",
            links=model.links,
            payload_mass=payload,
            adapter_mass=adapter,
            reference_positions={"C": (0.5, 0.0, 0.0)},
        )

    return make


@pytest.fixture
def planar2() -> RobotModel:
    return load_robot(DATA / "robots" / "planar2.json")


@pytest.fixture
def robot_file() -> Callable[[str], RobotModel]:
    def load(name: str) -> RobotModel:
        return load_robot(DATA / "robots" / f"{name}.json")

    return load


@pytest.fixture
def in_root(monkeypatch: pytest.MonkeyPatch) -> Path:
    """Run with the project root as working directory (paths in data files are relative to it)."""
    monkeypatch.chdir(ROOT)
    return ROOT
