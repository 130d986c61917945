"""Messages carried by messengers and the geometry of the two-beam source.

A scalar (photon) message ``(cos 2*pi*f*t, sin 2*pi*f*t)`` is stored as the
complex number ``cos + i sin``.  Polarized photons and neutrons carry a spinor,
a tuple of two complex amplitudes with unit norm.

Lengths are measured in units of c/f and times in units of 1/f, so a flight
over distance ``L`` advances the phase by ``2*pi*L``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .rng import RngStream

Spinor = tuple[complex, complex]
Message = Union[complex, Spinor]


@dataclass
class Messenger:
    message: Message
    path_label: int | None = None
    tof: float = 0.0


def scalar_message(phase: float) -> complex:
    return cmath.exp(1j * phase)


def as_vector(msg: complex) -> tuple[float, float]:
    """Real 2-vector form of a scalar message."""
    return (msg.real, msg.imag)


def photon_message(psi1: float, psi2: float, xi: float) -> Spinor:
    """Polarized photon with polarization angle ``xi`` and phases ``psi1``, ``psi2``."""
    return (cmath.exp(1j * psi1) * math.sin(xi), cmath.exp(1j * psi2) * math.cos(xi))


def neutron_message(psi1: float, psi2: float, theta: float) -> Spinor:
    """Neutron spinor with polar angle ``theta`` of the magnetic moment."""
    return (cmath.exp(1j * psi1) * math.cos(theta / 2), cmath.exp(1j * psi2) * math.sin(theta / 2))


def advance_phase(msg: Message, phi: float) -> Message:
    """Multiply the message by ``exp(i*phi)``."""
    rot = cmath.exp(1j * phi)
    if isinstance(msg, tuple):
        return (msg[0] * rot, msg[1] * rot)
    return msg * rot


def su2_matrix(axis: str, angle: float) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
    """``exp(i*(angle/2)*sigma_axis)`` as nested tuples."""
    c = math.cos(angle / 2)
    s = math.sin(angle / 2)
    if axis == "x":
        return ((c, 1j * s), (1j * s, c))
    if axis == "y":
        # i*sigma_y = [[0, 1], [-1, 0]]
        return ((c, s), (-s, c))
    if axis == "z":
        return ((complex(c, s), 0j), (0j, complex(c, -s)))
    raise ValueError(f"axis must be 'x', 'y' or 'z', got {axis!r}")


def su2_rotate(msg: Spinor, axis: str, angle: float) -> Spinor:
    (a, b), (c, d) = su2_matrix(axis, angle)
    m0, m1 = msg
    return (a * m0 + b * m1, c * m0 + d * m1)


# -- two-beam source -------------------------------------------------------

RANDOM_SOURCE = "random_source"
FIXED_SOURCE = "fixed_source"
ALTERNATING = "alternating"


@dataclass(frozen=True)
class EmissionMode:
    """Which source slit emits.

    ``kind`` is one of ``random_source``, ``fixed_source`` (``source`` = 1 or
    2, 1 being the upper slit) or ``alternating`` (groups of ``group`` events,
    upper slit first).
    """

    kind: str = RANDOM_SOURCE
    source: int = 1
    group: int = 1

    def __post_init__(self):
        if self.kind not in (RANDOM_SOURCE, FIXED_SOURCE, ALTERNATING):
            raise ValueError(f"unknown emission mode {self.kind!r}")
        if self.kind == FIXED_SOURCE and self.source not in (1, 2):
            raise ValueError("fixed source must be 1 or 2")
        if self.kind == ALTERNATING and self.group < 1:
            raise ValueError("alternating group size must be positive")

    def source_for(self, index: int, r: float) -> int:
        if self.kind == FIXED_SOURCE:
            return self.source
        if self.kind == ALTERNATING:
            return 1 if (index // self.group) % 2 == 0 else 2
        return 1 if r < 0.5 else 2


def check_two_beam_geometry(a: float, d: float) -> None:
    if not a > 0:
        raise ValueError("source width a must be positive")
    if not d > a:
        raise ValueError("source separation d must exceed the width a")


def two_beam_emit(
    rng: RngStream, a: float, d: float, mode: EmissionMode = EmissionMode(), index: int = 0
) -> tuple[float, float]:
    """Draw the emission point ``y`` and direction ``beta`` of one messenger.

    Three numbers are drawn per messenger (slit choice, offset within the
    slit, direction), whatever the mode, so that switching modes does not
    change how the stream is consumed.
    """
    check_two_beam_geometry(a, d)
    which = mode.source_for(index, rng.next_uniform())
    centre = d / 2 if which == 1 else -d / 2
    y = centre + a * (rng.next_uniform() - 0.5)
    beta = math.pi * (rng.next_uniform() - 0.5)
    return y, beta


def two_beam_geometry(y: float, beta: float, X: float) -> tuple[float, float]:
    """Screen angle and time of flight for emission point ``y`` and direction ``beta``.

    The screen is a half circle of radius ``X`` centred between the slits.
    The time is in units of 1/f, equal to the path length in units of c/f.
    """
    if abs(y) >= X:
        raise ValueError("emission point must lie inside the detector circle")
    cb = math.cos(beta)
    sin_theta = (y * cb * cb + math.sin(beta) * math.sqrt(X * X - y * y * cb * cb)) / X
    sin_theta = max(-1.0, min(1.0, sin_theta))
    t = math.sqrt(max(0.0, X * X - 2.0 * y * X * sin_theta + y * y))
    return math.asin(sin_theta), t


def two_beam_emit_batch(
    rng: RngStream, a: float, d: float, mode: EmissionMode, n: int, start_index: int = 0
):
    """Vectorized ``two_beam_emit`` for ``n`` consecutive messengers.

    Consumes the stream exactly as ``n`` calls to ``two_beam_emit`` would.
    """
    check_two_beam_geometry(a, d)
    draws = rng.uniforms(3 * n).reshape(n, 3)
    index = np.arange(start_index, start_index + n)
    if mode.kind == FIXED_SOURCE:
        upper = np.full(n, mode.source == 1)
    elif mode.kind == ALTERNATING:
        upper = (index // mode.group) % 2 == 0
    else:
        upper = draws[:, 0] < 0.5
    centre = np.where(upper, d / 2, -d / 2)
    y = centre + a * (draws[:, 1] - 0.5)
    beta = math.pi * (draws[:, 2] - 0.5)
    return y, beta


def two_beam_geometry_batch(y, beta, X: float):
    """Array version of ``two_beam_geometry``."""
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(y) >= X):
        raise ValueError("emission point must lie inside the detector circle")
    cb = np.cos(beta)
    sin_theta = (y * cb * cb + np.sin(beta) * np.sqrt(X * X - y * y * cb * cb)) / X
    sin_theta = np.clip(sin_theta, -1.0, 1.0)
    t = np.sqrt(np.maximum(0.0, X * X - 2.0 * y * X * sin_theta + y * y))
    return np.arcsin(sin_theta), t
