import cmath
import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from dlmsim.analysis import boole_triple_check, chsh_s, correlations, match_events, neutron_bell_correlation
from dlmsim.components import (
    NEUTRON,
    PHOTON_5050,
    POLARIZING,
    BeamSplitterState,
    SplitterKind,
    eom_transform,
    hwp_transform,
    phase_shift,
    splitter_process,
    transfer_amplitudes,
)
from dlmsim.dlm import DirectionDlmState, ScalarDlmState, direction_dlm_step, scalar_dlm_step
from dlmsim.messengers import su2_rotate, two_beam_geometry
from dlmsim.oracle import neutron_mzi_network, propagate_neutron_state

angles = st.floats(-10.0, 10.0, allow_nan=False)
unit = st.floats(0.0, 1.0, allow_nan=False)


@st.composite
def spinors(draw):
    a = draw(st.floats(0.0, math.pi / 2))
    p0, p1 = draw(angles), draw(angles)
    return (cmath.exp(1j * p0) * math.cos(a), cmath.exp(1j * p1) * math.sin(a))


def norm2(m):
    return sum(abs(x) ** 2 for x in m)


@given(spinors(), angles, st.sampled_from("xyz"))
def test_transforms_preserve_norm(msg, angle, axis):
    for out in (hwp_transform(msg, angle), eom_transform(msg, True, 0.3), phase_shift(msg, angle), su2_rotate(msg, axis, angle)):
        assert abs(norm2(out) - 1) < 1e-9
    back = su2_rotate(su2_rotate(msg, axis, angle), axis, -angle)
    assert all(abs(a - b) < 1e-12 for a, b in zip(back, msg))


@given(
    st.sampled_from([SplitterKind(PHOTON_5050), SplitterKind(NEUTRON, 0.2), SplitterKind(NEUTRON, 0.7), SplitterKind(POLARIZING)]),
    unit,
    spinors(),
    spinors(),
    spinors(),
    st.integers(0, 1),
    unit.filter(lambda r: r < 1.0),
)
def test_splitter_is_unitary_and_keeps_state_valid(kind, v0, r0, r1, msg, ch, r):
    n_comp = 1 if kind.kind == PHOTON_5050 else 2
    cut = (lambda m: (m[0] / abs(m[0]),) if abs(m[0]) > 1e-6 else (1 + 0j,)) if n_comp == 1 else (lambda m: m)
    state = BeamSplitterState((v0, 1 - v0), [cut(r0), cut(r1)], 0.9)
    out0, out1 = transfer_amplitudes(kind, state)
    assert abs(norm2(out0) + norm2(out1) - 1) < 1e-12
    m = cut(msg) if n_comp == 2 else cut(msg)[0]
    new, channel, out = splitter_process(state, kind, ch, m, r)
    assert channel in (0, 1)
    assert abs(norm2(out if n_comp == 2 else (out,)) - 1) < 1e-9
    assert new.v[0] >= 0 and new.v[1] >= 0 and abs(sum(new.v) - 1) < 1e-12


@given(unit, unit, st.floats(0.0, 0.999))
def test_scalar_state_stays_in_unit_interval(v, u, g):
    state, w = scalar_dlm_step(ScalarDlmState(v, g), u)
    assert 0.0 <= state.v <= 1.0 and w in (-1, 1)


@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi), st.floats(0.0, 0.999))
def test_direction_state_stays_unit(a, b, g):
    state, w = direction_dlm_step(DirectionDlmState(math.cos(a), math.sin(a), g), (math.cos(b), math.sin(b)))
    assert abs(state.v0**2 + state.v1**2 - 1) < 1e-12 and w in (0, 1)


@given(st.floats(-2.9, 2.9), st.floats(-1.5, 1.5))
def test_geometry_bounds(y, beta):
    theta, t = two_beam_geometry(y, beta, 75.0)
    assert -math.pi / 2 <= theta <= math.pi / 2
    assert 75.0 - abs(y) - 1e-9 <= t <= 75.0 + abs(y) + 1e-9


@given(st.floats(0.0, 1.0), angles, angles)
def test_oracle_network_preserves_norm(R, chi0, chi1):
    psi = np.zeros(8, dtype=complex)
    psi[0] = 1
    out = propagate_neutron_state(neutron_mzi_network(R, chi0, chi1), psi)
    assert abs(np.vdot(out, out).real - 1) < 1e-12


@given(st.lists(st.tuples(*[st.sampled_from([-1, 1])] * 3), min_size=1, max_size=200))
def test_boole_always_holds(triples):
    assert boole_triple_check(triples).holds


@given(st.lists(st.tuples(*[st.sampled_from([-1, 1])] * 4), min_size=1, max_size=100))
def test_quadruple_data_cannot_exceed_two(quads):
    q = np.array(quads)
    e = lambda i, j: float(np.mean(q[:, i] * q[:, j]))
    assert abs(chsh_s(e(0, 2), e(0, 3), e(1, 2), e(1, 3))) <= 2 + 1e-12


@given(st.lists(st.integers(0, 50), min_size=4, max_size=4).filter(lambda c: sum(c) > 0))
def test_correlations_are_bounded_and_exact(c):
    e1, e2, e = correlations(np.array(c).reshape(2, 2))
    n = sum(c)
    assert all(-1 <= x <= 1 for x in (e1, e2, e))
    # int / int is correctly rounded, so this is the exact rational value
    assert e == (c[0] + c[3] - c[1] - c[2]) / n
    assert -1 <= neutron_bell_correlation(*c) <= 1


@settings(max_examples=100)
@given(
    st.lists(st.floats(0, 100), max_size=40),
    st.lists(st.floats(0, 100), max_size=40),
    st.floats(0, 10),
    st.floats(0, 10),
)
def test_coincidences_monotone_in_window(t1, t2, w_a, w_b):
    lo, hi = sorted((w_a, w_b))
    n_lo = len(match_events(t1, t2, lo)[0])
    n_hi = len(match_events(t1, t2, hi)[0])
    assert n_lo <= n_hi <= min(len(t1), len(t2))
