import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pulsedqubit.errors import InvalidConfig, OutOfPulse, RequiresResonance
from pulsedqubit.propagators import (
    DriveConfig,
    Scheme,
    evolve,
    nonrwa_matrix,
    rotation_matrix,
    rwa_matrix,
    trajectory,
    trajectory_array,
)
from pulsedqubit.states import BlochVector


def cfg(**kw):
    kw.setdefault("pulse_duration", 1e3)
    return DriveConfig(**kw)


def test_drive_config_validation():
    for bad in (dict(omega=0), dict(omega_l=-1), dict(pulse_duration=0), dict(lam=-0.1), dict(lam=0.51)):
        with pytest.raises(InvalidConfig):
            DriveConfig(**bad)
    with pytest.raises(InvalidConfig):
        DriveConfig(envelope="gaussian")
    c = DriveConfig(omega=3.0, delta=-4.0, omega_l=10.0)
    assert c.omega_1 == 5.0
    assert c.omega_a == 6.0
    assert c.envelope_at(0.5) == 1.0 and c.envelope_at(c.pulse_duration + 1) == 0.0


def test_rwa_identity_at_zero():
    assert np.allclose(rwa_matrix(cfg(omega=2.3, delta=-1.7), 0.0), np.eye(3), atol=1e-15, rtol=0)


def test_rwa_quarter_turn_on_resonance():
    m = rwa_matrix(cfg(omega=2.0), math.pi / 4)
    expected = [[1, 0, 0], [0, 0, -1], [0, 1, 0]]
    assert np.allclose(m, expected, atol=1e-15)
    assert np.allclose(m, rotation_matrix((1, 0, 0), math.pi / 2), atol=1e-15)


def test_rwa_off_resonance_is_orthogonal():
    m = rwa_matrix(cfg(omega=1.0, delta=0.8), 1.0)
    assert np.abs(m.T @ m - np.eye(3)).max() <= 1e-12


def test_out_of_pulse():
    c = DriveConfig(omega=1.0, pulse_duration=2.0)
    with pytest.raises(OutOfPulse):
        rwa_matrix(c, 2.0 + 1e-9)
    with pytest.raises(OutOfPulse):
        nonrwa_matrix(c, -1e-9)
    rwa_matrix(c, 2.0)


def test_nonrwa_requires_resonance():
    with pytest.raises(RequiresResonance):
        nonrwa_matrix(cfg(delta=0.1, lam=0.1), 0.0)


def test_nonrwa_at_t0():
    m = nonrwa_matrix(cfg(omega=1.0, omega_l=1.0, lam=0.2), 0.0)
    assert m[0, 0] == pytest.approx(1.15, abs=1e-15)
    assert m[1, 1] == pytest.approx(0.85, abs=1e-15)
    assert m[2, 2] == 1.0
    for i, j in ((1, 0), (0, 1), (2, 0), (0, 2)):
        assert m[i, j] == pytest.approx(0.0, abs=1e-15)
    assert not np.allclose(m, np.eye(3))


def test_nonrwa_entries_by_hand():
    # direct evaluation of each coefficient at one generic point
    lam, om, wl, t = 0.3, 1.3, 2.9, 0.77
    m = nonrwa_matrix(cfg(omega=om, omega_l=wl, lam=lam), t)
    c, s, c2, s2 = math.cos(om * t), math.sin(om * t), math.cos(2 * wl * t), math.sin(2 * wl * t)
    expected = [
        [1 + lam * ((2 - s2 / 4) * s + (1 - c2 / 4) * c), -lam / 4 * ((1 - c2) * s - s2 * c), lam / 2 * (c2 * c - 1)],
        [lam / 4 * ((1 - c2) * s + s2 * c), c - lam / 4 * (s2 * s + (4 - c2) * c), -s - lam / 2 * s2 * c],
        [lam * (2 - c2 - c), s + lam * s2, c],
    ]
    assert np.allclose(m, expected, atol=1e-15)


def test_reduction_law_random():
    rng = np.random.default_rng(3)
    for _ in range(100):
        om, wl = rng.uniform(0.1, 10, 2)
        t = rng.uniform(0, 10 / om)
        c = cfg(omega=om, omega_l=wl, lam=0.0)
        assert np.abs(nonrwa_matrix(c, t) - rwa_matrix(c, t)).max() <= 1e-15


def test_lambda_affine():
    rng = np.random.default_rng(4)
    for _ in range(50):
        om, wl = rng.uniform(0.1, 5, 2)
        t = rng.uniform(0, 10)
        m0, m1, m2 = (nonrwa_matrix(cfg(omega=om, omega_l=wl, lam=l), t) for l in (0.0, 0.1, 0.2))
        assert np.abs(m2 - 2 * m1 + m0).max() <= 1e-12
        assert np.abs(m2).max() <= 1 + 3 * 0.2


def test_rotation_identity_random():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        om, de = rng.uniform(0.1, 10), rng.uniform(-5, 5)
        t = rng.uniform(0, 10 / om)
        c = cfg(omega=om, delta=de)
        m = rwa_matrix(c, t)
        assert np.abs(m - rotation_matrix((om, 0, de), c.omega_1 * t)).max() <= 1e-12
        assert abs(np.linalg.det(m) - 1) <= 1e-12


params = st.tuples(st.floats(0.1, 10), st.floats(-5, 5), st.floats(0, 1), st.floats(0, 1))


@given(params)
def test_periodicity_and_composition(p):
    om, de, a, b = p
    c = cfg(omega=om, delta=de)
    t1, t2 = a * 10 / om, b * 10 / om
    period = 2 * math.pi / c.omega_1
    assert np.abs(rwa_matrix(c, t1 + period) - rwa_matrix(c, t1)).max() <= 1e-12
    assert np.abs(rwa_matrix(c, t1 + t2) - rwa_matrix(c, t1) @ rwa_matrix(c, t2)).max() <= 1e-12


@given(params, st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)))
def test_norm_preserved(p, v):
    om, de, a, _ = p
    u0 = BlochVector(*v)
    u = evolve(u0, rwa_matrix(cfg(omega=om, delta=de), a * 10 / om))
    assert abs(u.norm - u0.norm) <= 1e-12


def test_evolve_examples():
    u0 = BlochVector(0.3, -0.2, 0.5)
    assert evolve(u0, np.eye(3)) == u0
    c = cfg(omega=1.0)
    assert np.allclose(evolve(BlochVector(0, 1, 0), rwa_matrix(c, math.pi)).as_array(), [0, -1, 0], atol=1e-15)
    assert np.allclose(evolve(u0, rwa_matrix(c, 2 * math.pi)).as_array(), u0.as_array(), atol=1e-12)


def test_trajectory():
    c = cfg(omega=1.3)
    u0 = BlochVector(0.0, 0.6, 0.8)
    assert trajectory(c, u0, [0.0], Scheme.RWA) == [(0.0, u0)]
    grid = [0.1, 0.5, 2.0]
    assert trajectory(c, u0, grid, "RWA") == [(t, evolve(u0, rwa_matrix(c, t))) for t in grid]
    assert trajectory_array(c, u0, grid).shape == (3, 3)
    with pytest.raises(ValueError):
        trajectory(c, u0, [0.5, 0.5])
