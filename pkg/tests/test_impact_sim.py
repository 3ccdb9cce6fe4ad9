from __future__ import annotations

import math

import numpy as np
import pytest

from pfl.contact_model import contact_force, effective_mass
from pfl.errors import ImpactConfigError
from pfl.impact_sim import ImpactConfig, Integrator, peak_force_analytic, run_simulation, simulate, total_energy
from pfl.trace import TraceSource


def _half_period_config(mu: float, k: float, v: float, steps: int = 400, **extra) -> ImpactConfig:
    period = 2 * math.pi * math.sqrt(mu / k)
    return ImpactConfig(robot_mass=mu, robot_velocity=v, stiffness=k, duration=0.6 * period, dt=period / steps, **extra)


def test_zero_velocity_gives_zero_trace():
    trace = simulate(ImpactConfig(robot_mass=1.0, robot_velocity=0.0, stiffness=75000))
    assert trace.source is TraceSource.SIMULATED
    assert not trace.forces.any()


def test_constrained_peak_matches_force_model():
    cfg = ImpactConfig(robot_mass=0.57, robot_velocity=1.0, stiffness=75000)
    peak = float(simulate(cfg).forces.max())
    assert peak == pytest.approx(206.8, rel=0.005)
    assert peak <= peak_force_analytic(cfg) * (1 + 1e-12)


def test_two_body_peak_uses_reduced_mass():
    cfg = ImpactConfig(robot_mass=10.87, robot_velocity=1.0, stiffness=75000, human_mass=0.6)
    assert cfg.mu == pytest.approx(effective_mass(10.87, 0.6))
    assert float(simulate(cfg).forces.max()) == pytest.approx(206.5, rel=0.005)


def test_two_body_momentum_is_conserved():
    cfg = ImpactConfig(robot_mass=10.87, robot_velocity=1.0, stiffness=75000, human_mass=0.6, duration=0.02, dt=1e-5)
    states = run_simulation(cfg).states
    momentum = 10.87 * states[:, 1] + 0.6 * states[:, 3]
    assert np.allclose(momentum, 10.87, rtol=1e-9)
    assert states[-1, 3] > 0


def test_analytic_peak():
    assert peak_force_analytic(ImpactConfig(robot_mass=2.0, robot_velocity=3.0, stiffness=2.0)) == pytest.approx(6.0)
    cfg = ImpactConfig(robot_mass=10.87, robot_velocity=0.28, stiffness=75000)
    assert peak_force_analytic(cfg) == pytest.approx(252.8, abs=0.05)
    with pytest.raises(ImpactConfigError):
        peak_force_analytic(ImpactConfig(robot_mass=1.0, robot_velocity=1.0, stiffness=75000, damping=10.0))


def test_random_configs_match_force_model_and_conserve_energy():
    rng = np.random.default_rng(99)
    for _ in range(20):
        mu = rng.uniform(0.3, 12.0)
        k = rng.uniform(1e4, 1e5)
        v = rng.uniform(0.05, 1.5)
        cfg = _half_period_config(mu, k, v)
        run = run_simulation(cfg)
        assert float(run.trace.forces.max()) == pytest.approx(contact_force(v, mu, k), rel=0.005)
        initial = total_energy(cfg, run.states[0])
        drift = max(abs(total_energy(cfg, state) - initial) for state in run.states) / initial
        assert drift < 1e-6


def test_sampled_peak_error_is_second_order_in_dt():
    mu, k, v = 0.57, 75000.0, 1.0
    analytic = contact_force(v, mu, k)
    for steps in (64, 100, 200, 400):
        cfg = _half_period_config(mu, k, v, steps=steps)
        error = analytic - float(simulate(cfg).forces.max())
        # sampling a half sine: the nearest sample is at most dt/2 from the crest
        bound = analytic * (1 - math.cos(math.pi / steps))
        assert -1e-9 * analytic <= error <= bound + 1e-9 * analytic


def test_contact_ends_after_half_period():
    mu, k = 2.0, 50000.0
    cfg = _half_period_config(mu, k, 0.5)
    run = run_simulation(cfg)
    names = [name for _, name in run.events]
    assert names == ["contact_end"]
    assert run.events[0][0] == pytest.approx(math.pi * math.sqrt(mu / k), rel=1e-9)
    assert run.states[-1, 1] == pytest.approx(-0.5, rel=1e-9)


def test_symplectic_euler_agrees():
    cfg = _half_period_config(0.57, 75000.0, 1.0, steps=5000, integrator=Integrator.SYMPLECTIC_EULER)
    assert float(simulate(cfg).forces.max()) == pytest.approx(contact_force(1.0, 0.57, 75000.0), rel=0.01)


def test_damping_dissipates_energy():
    cfg = _half_period_config(1.0, 75000.0, 1.0, damping=50.0)
    run = run_simulation(cfg)
    assert total_energy(cfg, run.states[-1]) < total_energy(cfg, run.states[0])


def test_clamp_hold_produces_plateau_at_the_peak():
    cfg = _half_period_config(0.57, 75000.0, 1.0, clamp_hold=True)
    run = run_simulation(cfg)
    assert [name for _, name in run.events] == ["hold"]
    hold_time = run.events[0][0]
    after = run.trace.forces[run.trace.times > hold_time]
    assert np.allclose(after, peak_force_analytic(cfg), rtol=1e-9)


def test_retraction_caps_peak_at_detection_force():
    peaks = []
    for detection in (150.0, 100.0, 50.0):
        cfg = ImpactConfig(
            robot_mass=0.57,
            robot_velocity=1.0,
            stiffness=75000,
            detection_force=detection,
            reaction_delay=0.0,
            retraction_velocity=0.5,
            clamp_hold=True,
            duration=0.6,
            dt=1e-4,
        )
        run = run_simulation(cfg)
        names = [name for _, name in run.events]
        assert names[:3] == ["detect", "retract", "contact_end"]
        peak = float(run.trace.forces.max())
        # sampled: at most one step of force rise below the threshold
        assert detection - 10.0 <= peak <= detection + 1e-9
        assert run.trace.forces[-1] == 0.0
        peaks.append(peak)
    assert peaks == sorted(peaks, reverse=True)


@pytest.mark.parametrize(
    "fields, message",
    [
        ({"robot_mass": 0.0}, "robot_mass"),
        ({"human_mass": -1.0}, "human_mass"),
        ({"robot_velocity": -1.0}, "robot_velocity"),
        ({"dt": 1e-3}, "does not resolve"),
        ({"duration": 5e-5}, "10 time steps"),
        ({"detection_force": 0.0}, "detection_force"),
        ({"damping": -1.0}, "damping"),
    ],
)
def test_config_validation(fields, message):
    base = dict(robot_mass=0.57, robot_velocity=1.0, stiffness=75000.0)
    base.update(fields)
    with pytest.raises(ImpactConfigError, match=message):
        ImpactConfig(**base)
