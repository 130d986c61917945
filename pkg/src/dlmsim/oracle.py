"""Closed-form wave and quantum predictions used as targets for the simulations.

The neutron interferometer predictions are available twice: as closed-form
expressions and by propagating an 8-component state vector (four paths times
two spin states) through the network one 2x2 block at a time.  The two routes
are written independently so that each checks the other.

State index ``2*path + spin`` holds the amplitude for ``path`` in 0..3 and
spin up (0) or down (1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def malus_intensity(psi: float, phi: float) -> tuple[float, float]:
    """Ordinary and extraordinary fractions behind a calcite crystal."""
    d = psi - phi
    return math.sin(d) ** 2, math.cos(d) ** 2


def _sinc2(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-6
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 3.0, (np.sin(safe) / safe) ** 2)


def two_beam_intensity(theta, a: float = 1.0, d: float = 5.0, q: float = 2 * math.pi):
    """Far-field intensity of two slits of width ``a`` and separation ``d``.

    Normalized to 1 at ``theta = 0``.  Lengths in units of c/f, for which the
    wave number ``q`` is 2*pi.
    """
    if not a > 0:
        raise ValueError("a must be positive")
    s = np.sin(np.asarray(theta, dtype=float))
    out = _sinc2(q * a * s / 2) * np.cos(q * d * s / 2) ** 2
    return float(out) if out.ndim == 0 else out


def single_slit_envelope(theta, a: float = 1.0, q: float = 2 * math.pi):
    s = np.sin(np.asarray(theta, dtype=float))
    out = _sinc2(q * a * s / 2)
    return float(out) if out.ndim == 0 else out


def mzi_matrix(phi0: float, phi1: float) -> np.ndarray:
    """Transfer matrix of two 50/50 splitters around two phase shifters."""
    bs = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)
    return bs @ np.diag([np.exp(1j * phi0), np.exp(1j * phi1)]) @ bs


def mzi_probabilities(phi0: float, phi1: float) -> tuple[float, float]:
    """Output probabilities for a photon entering port 0."""
    d = (phi0 - phi1) / 2
    return math.sin(d) ** 2, math.cos(d) ** 2


def neutron_mzi_probabilities(chi: float, R: float) -> tuple[float, float]:
    """Probabilities of leaving through the H and O beams."""
    if not 0.0 <= R <= 1.0:
        raise ValueError("R must lie in [0, 1]")
    T = 1.0 - R
    c = math.cos(chi)
    return R * (T * T + R * R - 2 * R * T * c), 2 * R * R * T * (1 + c)


def neutron_bell_probability(alpha: float, chi: float, R: float) -> float:
    """Probability of a spin-up count in the O beam of the Bell interferometer."""
    T = 1.0 - R
    return T * R * R * (1 + math.cos(alpha + chi))


def neutron_bell_E(alpha: float, chi: float) -> float:
    return math.cos(alpha + chi)


def singlet_correlation(a1: float, a2: float) -> tuple[float, float, float]:
    """Single-particle averages and the two-particle correlation of a photon singlet."""
    return 0.0, 0.0, -math.cos(2 * (a1 - a2))


def spin_singlet_correlation(a1, a2) -> float:
    """``-a1 . a2`` for spin-1/2 singlet with unit direction vectors."""
    return -float(np.dot(a1, a2))


# -- 8-component state propagation ----------------------------------------


@dataclass(frozen=True)
class Block:
    """A 2x2 matrix acting on state components ``i`` and ``j``."""

    matrix: np.ndarray
    i: int
    j: int


def _check_unitary(m: np.ndarray) -> None:
    if m.shape != (2, 2) or not np.allclose(m.conj().T @ m, np.eye(2), atol=1e-12):
        raise ValueError("network blocks must be unitary 2x2 matrices")


def propagate_neutron_state(network, psi) -> np.ndarray:
    """Apply ``network`` (blocks in the order the neutron meets them) to ``psi``."""
    out = np.array(psi, dtype=complex)
    if out.shape != (8,):
        raise ValueError("state vector must have 8 components")
    start = np.vdot(out, out).real
    for block in network:
        _check_unitary(block.matrix)
        a, b = out[block.i], out[block.j]
        out[block.i] = block.matrix[0, 0] * a + block.matrix[0, 1] * b
        out[block.j] = block.matrix[1, 0] * a + block.matrix[1, 1] * b
    if abs(np.vdot(out, out).real - start) > 1e-12:
        raise ArithmeticError("norm not preserved")
    return out


def _splitter(t: complex, r: complex) -> np.ndarray:
    return np.array([[t, -np.conj(r)], [r, np.conj(t)]])


def _splitter_adjoint_form(t: complex, r: complex) -> np.ndarray:
    return np.array([[np.conj(t), r], [-np.conj(r), t]])


def _phase(phi: float) -> np.ndarray:
    return np.exp(1j * phi) * np.eye(2)


def _both_spins(matrix, path_a: int, path_b: int):
    return [Block(matrix, 2 * path_a, 2 * path_b), Block(matrix, 2 * path_a + 1, 2 * path_b + 1)]


def neutron_mzi_network(R: float, chi0: float, chi1: float = 0.0):
    """Blocks of the triple-Laue interferometer; paths 2 and 3 are the H and O beams."""
    t, r = math.sqrt(1 - R), math.sqrt(R)
    bs = _splitter(t, r)
    bs_out = _splitter_adjoint_form(t, r)
    return (
        _both_spins(bs, 0, 1)
        + _both_spins(bs, 0, 2)
        + _both_spins(bs_out, 1, 3)
        + [Block(_phase(chi0), 4, 5), Block(_phase(chi1), 6, 7)]
        + _both_spins(bs_out, 2, 3)
    )


def neutron_bell_network(R: float, alpha: float, chi0: float, chi1: float = 0.0):
    """As ``neutron_mzi_network`` with spin rotations on both arms and a spin rotator on the O beam."""
    t, r = math.sqrt(1 - R), math.sqrt(R)
    bs = _splitter(t, r)
    bs_out = _splitter_adjoint_form(t, r)
    h = 1 / math.sqrt(2)
    turn_down = np.array([[h, -h], [h, h]])
    turn_up = np.array([[h, h], [-h, h]])
    c, s = math.cos(alpha / 2), math.sin(alpha / 2)
    rotator = np.array([[c, 1j * s], [1j * s, c]])
    return (
        _both_spins(bs, 0, 1)
        + [Block(turn_down, 0, 1), Block(turn_up, 2, 3)]
        + _both_spins(bs, 0, 2)
        + _both_spins(bs_out, 1, 3)
        + [Block(_phase(chi0), 4, 5), Block(_phase(chi1), 6, 7)]
        + _both_spins(bs_out, 2, 3)
        + [Block(rotator, 6, 7)]
    )


def spin_up_input() -> np.ndarray:
    psi = np.zeros(8, dtype=complex)
    psi[0] = 1.0
    return psi
