import cmath
import math

import numpy as np
import pytest
from scipy.linalg import expm

from dlmsim.messengers import (
    ALTERNATING,
    FIXED_SOURCE,
    RANDOM_SOURCE,
    EmissionMode,
    advance_phase,
    neutron_message,
    photon_message,
    su2_matrix,
    su2_rotate,
    two_beam_emit,
    two_beam_emit_batch,
    two_beam_geometry,
    two_beam_geometry_batch,
)
from dlmsim.rng import RngStream

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]]),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def test_advance_phase_examples():
    assert advance_phase(1 + 0j, 0.0) == 1 + 0j
    assert abs(advance_phase(1 + 0j, math.pi / 2) - 1j) < 1e-15
    m = photon_message(0.3, 1.1, 0.7)
    back = advance_phase(m, 2 * math.pi)
    assert all(abs(a - b) < 1e-12 for a, b in zip(m, back))


def test_messages_are_unit():
    for m in (photon_message(0.1, 2.0, 0.4), neutron_message(0.5, -1.0, 2.2)):
        assert abs(abs(m[0]) ** 2 + abs(m[1]) ** 2 - 1) < 1e-12


@pytest.mark.parametrize("axis", ["x", "y", "z"])
@pytest.mark.parametrize("angle", [0.0, 0.4, math.pi / 2, math.pi, 5.0])
def test_su2_matches_matrix_exponential(axis, angle):
    want = expm(1j * angle / 2 * PAULI[axis])
    got = np.array(su2_matrix(axis, angle), dtype=complex)
    assert np.allclose(got, want, atol=1e-12)


def test_su2_examples():
    assert su2_rotate((1 + 0j, 0j), "z", 0.0) == (1 + 0j, 0j)
    x = su2_rotate((1 + 0j, 0j), "x", math.pi)
    assert abs(x[0]) < 1e-15 and abs(x[1] - 1j) < 1e-15
    # exp(i pi sigma_y / 4) (1, 0) = (cos pi/4, -sin pi/4): sigma_y has -i in the top right
    y = su2_rotate((1 + 0j, 0j), "y", math.pi / 2)
    assert abs(y[0] - math.cos(math.pi / 4)) < 1e-15 and abs(y[1] + math.sin(math.pi / 4)) < 1e-15


def test_su2_rejects_unknown_axis():
    with pytest.raises(ValueError):
        su2_matrix("w", 1.0)


def test_emission_modes():
    s = RngStream(0, 0)
    ys = [two_beam_emit(s, 1.0, 5.0, EmissionMode(FIXED_SOURCE, source=1))[0] for _ in range(1000)]
    assert all(2.0 <= y <= 3.0 for y in ys)
    mode = EmissionMode(ALTERNATING, group=3)
    assert [mode.source_for(i, 0.0) for i in range(6)] == [1, 1, 1, 2, 2, 2]
    y, beta = two_beam_emit_batch(RngStream(1, 0), 1.0, 5.0, EmissionMode(RANDOM_SOURCE), 100_000)
    assert abs(np.mean(y > 0) - 0.5) < 0.01
    assert np.all(np.abs(beta) < math.pi / 2)


def test_emission_mode_validation():
    with pytest.raises(ValueError):
        EmissionMode("sideways")
    with pytest.raises(ValueError):
        EmissionMode(FIXED_SOURCE, source=3)
    with pytest.raises(ValueError):
        two_beam_emit(RngStream(0, 0), 2.0, 1.0)


def test_batch_emission_matches_loop():
    a = RngStream(4, "src")
    b = RngStream(4, "src")
    mode = EmissionMode(ALTERNATING, group=7)
    loop = np.array([two_beam_emit(a, 1.0, 5.0, mode, k) for k in range(500)])
    y, beta = two_beam_emit_batch(b, 1.0, 5.0, mode, 500)
    assert np.array_equal(loop[:, 0], y) and np.array_equal(loop[:, 1], beta)


def test_geometry_examples():
    theta, t = two_beam_geometry(0.0, math.radians(30), 75.0)
    assert theta == pytest.approx(math.radians(30), abs=1e-12) and t == pytest.approx(75.0)
    theta, t = two_beam_geometry(2.5, 0.0, 75.0)
    assert math.sin(theta) == pytest.approx(1 / 30, abs=1e-14)
    assert t == pytest.approx(math.sqrt(75.0**2 - 2.5**2), abs=1e-12)
    th1, t1 = two_beam_geometry(1.7, 0.3, 75.0)
    th2, t2 = two_beam_geometry(-1.7, -0.3, 75.0)
    assert th2 == pytest.approx(-th1, abs=1e-14) and t2 == pytest.approx(t1, abs=1e-12)


def test_geometry_point_lies_on_circle():
    # independent check: the point at angle theta on the circle lies on the ray from (0, y)
    rng = np.random.default_rng(3)
    X = 75.0
    for _ in range(200):
        y, beta = rng.uniform(-3, 3), rng.uniform(-1.5, 1.5)
        theta, t = two_beam_geometry(y, beta, X)
        px, py = X * math.cos(theta), X * math.sin(theta)
        assert math.atan2(py - y, px) == pytest.approx(beta, abs=1e-9)
        assert math.hypot(px, py - y) == pytest.approx(t, abs=1e-9)
        assert X - abs(y) - 1e-9 <= t <= X + abs(y) + 1e-9


def test_geometry_batch_matches_scalar():
    rng = np.random.default_rng(5)
    y, beta = rng.uniform(-3, 3, 50), rng.uniform(-1.5, 1.5, 50)
    th, t = two_beam_geometry_batch(y, beta, 75.0)
    for k in range(50):
        a, b = two_beam_geometry(y[k], beta[k], 75.0)
        assert th[k] == pytest.approx(a, abs=1e-14) and t[k] == pytest.approx(b, abs=1e-12)
    with pytest.raises(ValueError):
        two_beam_geometry(80.0, 0.0, 75.0)
