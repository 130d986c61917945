"""Event-by-event optical and neutron components.

The beam splitter is the only component with memory.  It keeps an estimate
``v`` of how often each input port is used, and one register per port holding
the last message seen there.  For every arrival it combines both registers
through the device's transfer matrix and picks an output port at random with
the resulting weights.  All other components are memoryless transforms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .messengers import Message, advance_phase
from .rng import RngStream

PHOTON_5050 = "photon_5050"
POLARIZING = "polarizing"
NEUTRON = "neutron"

_S = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class SplitterKind:
    """Transfer matrix family of a beam splitter.

    ``reflectivity`` is only used by the neutron kind.
    """

    kind: str = PHOTON_5050
    reflectivity: float = 0.5

    def __post_init__(self):
        if self.kind not in (PHOTON_5050, POLARIZING, NEUTRON):
            raise ValueError(f"unknown splitter kind {self.kind!r}")
        if not 0.0 <= self.reflectivity <= 1.0:
            raise ValueError("reflectivity must lie in [0, 1]")

    @property
    def primary_channel(self) -> int:
        """Output port whose weight is compared with the random number."""
        return 1 if self.kind == POLARIZING else 0

    def matrices(self, n_components: int):
        """One 2x2 matrix ``m[out][in]`` per message component."""
        if self.kind == PHOTON_5050:
            m = ((_S, 1j * _S), (1j * _S, _S))
            return (m,) * n_components
        if self.kind == NEUTRON:
            t = math.sqrt(1.0 - self.reflectivity)
            r = 1j * math.sqrt(self.reflectivity)
            return (((t, r), (r, t)),) * n_components
        if n_components != 2:
            raise ValueError("a polarizing splitter needs two-component messages")
        # first component is transmitted, second reflected with a phase i
        return (((0, 1), (1, 0)), ((1j, 0), (0, 1j)))


@dataclass
class BeamSplitterState:
    v: tuple[float, float]
    registers: list = field(default_factory=list)
    gamma: float = 0.99


def _components(msg: Message) -> tuple:
    return msg if isinstance(msg, tuple) else (msg,)


def _random_message(stream: RngStream, n_components: int) -> tuple:
    if n_components == 1:
        return (cmath.exp(2j * math.pi * stream.next_uniform()),)
    psi1 = 2 * math.pi * stream.next_uniform()
    psi2 = 2 * math.pi * stream.next_uniform()
    xi = 0.5 * math.pi * stream.next_uniform()
    return (cmath.exp(1j * psi1) * math.cos(xi), cmath.exp(1j * psi2) * math.sin(xi))


def initial_splitter_state(stream: RngStream, gamma: float, n_components: int) -> BeamSplitterState:
    """Random input-ratio estimate and random unit registers."""
    r = stream.next_uniform()
    registers = [_random_message(stream, n_components), _random_message(stream, n_components)]
    return BeamSplitterState((r, 1.0 - r), registers, gamma)


def _combine(kind_matrices, v, registers):
    a0 = math.sqrt(v[0])
    a1 = math.sqrt(v[1])
    reg0, reg1 = registers
    out0 = []
    out1 = []
    for m, x, y in zip(kind_matrices, reg0, reg1):
        x *= a0
        y *= a1
        out0.append(m[0][0] * x + m[0][1] * y)
        out1.append(m[1][0] * x + m[1][1] * y)
    return out0, out1


def _norm2(amps) -> float:
    return sum(a.real * a.real + a.imag * a.imag for a in amps)


def transfer_amplitudes(kind: SplitterKind, state: BeamSplitterState):
    """Unnormalized amplitudes on output ports 0 and 1 for the current state."""
    n_comp = len(state.registers[0])
    return _combine(kind.matrices(n_comp), state.v, state.registers)


def _select(out0, out1, primary: int, r: float):
    pair = (out0, out1)
    p = _norm2(pair[primary])
    channel = primary if p > r else 1 - primary
    chosen = pair[channel]
    norm2 = _norm2(chosen)
    if norm2 == 0.0:
        channel = 1 - channel
        chosen = pair[channel]
        norm2 = _norm2(chosen)
    scale = 1.0 / math.sqrt(norm2)
    return channel, tuple(a * scale for a in chosen)


def splitter_process(state: BeamSplitterState, kind: SplitterKind, input_channel: int, msg: Message, r: float):
    """Functional form of ``BeamSplitter.process``; ``state`` is not modified."""
    if input_channel not in (0, 1):
        raise ValueError("input channel must be 0 or 1")
    comps = _components(msg)
    registers = list(state.registers)
    registers[input_channel] = comps
    g = state.gamma
    v0 = g * state.v[0] + (1.0 - g) * (1.0 if input_channel == 0 else 0.0)
    v = (v0, 1.0 - v0)
    out0, out1 = _combine(kind.matrices(len(comps)), v, registers)
    channel, out = _select(out0, out1, kind.primary_channel, r)
    new_state = BeamSplitterState(v, registers, g)
    return new_state, channel, (out if isinstance(msg, tuple) else out[0])


class BeamSplitter:
    """Beam splitter with memory, updated in place.

    Parameters:
        kind: transfer matrix family.
        gamma: memory parameter of the input-ratio estimate.
        stream: random numbers for initialization and output selection.
        n_components: 1 for scalar photon messages, 2 for spinors.
    """

    def __init__(self, kind: SplitterKind, gamma: float, stream: RngStream, n_components: int = 1):
        self.kind = kind
        self.stream = stream
        self.n_components = n_components
        self._matrices = kind.matrices(n_components)
        self._primary = kind.primary_channel
        init = initial_splitter_state(stream, gamma, n_components)
        self.gamma = gamma
        self.v0 = init.v[0]
        self.registers = init.registers

    @property
    def state(self) -> BeamSplitterState:
        return BeamSplitterState((self.v0, 1.0 - self.v0), list(self.registers), self.gamma)

    def process(self, input_channel: int, msg: Message):
        """Route one message; returns ``(output_channel, output_message)``.

        Same arithmetic as ``splitter_process``, unrolled for speed.
        """
        spinor = isinstance(msg, tuple)
        regs = self.registers
        regs[input_channel] = msg if spinor else (msg,)
        g = self.gamma
        v0 = self.v0 = g * self.v0 + (1.0 - g if input_channel == 0 else 0.0)
        a0 = math.sqrt(v0)
        a1 = math.sqrt(1.0 - v0)
        r = self.stream.next_uniform()
        (m00, m01), (m10, m11) = self._matrices[0]
        x = regs[0][0] * a0
        y = regs[1][0] * a1
        p0 = m00 * x + m01 * y
        q0 = m10 * x + m11 * y
        if not spinor:
            out = (p0, q0)
            w0 = p0.real * p0.real + p0.imag * p0.imag
            w1 = q0.real * q0.real + q0.imag * q0.imag
            weights = (w0, w1)
            ch = self._primary if weights[self._primary] > r else 1 - self._primary
            if weights[ch] == 0.0:
                ch = 1 - ch
            return ch, out[ch] / math.sqrt(weights[ch])
        (n00, n01), (n10, n11) = self._matrices[1]
        x = regs[0][1] * a0
        y = regs[1][1] * a1
        p1 = n00 * x + n01 * y
        q1 = n10 * x + n11 * y
        w0 = p0.real * p0.real + p0.imag * p0.imag + p1.real * p1.real + p1.imag * p1.imag
        w1 = q0.real * q0.real + q0.imag * q0.imag + q1.real * q1.real + q1.imag * q1.imag
        weights = (w0, w1)
        ch = self._primary if weights[self._primary] > r else 1 - self._primary
        if weights[ch] == 0.0:
            ch = 1 - ch
        s = 1.0 / math.sqrt(weights[ch])
        if ch == 0:
            return 0, (p0 * s, p1 * s)
        return 1, (q0 * s, q1 * s)


# -- memoryless components --------------------------------------------------


def hwp_transform(msg, theta: float):
    """Half-wave plate with optical axis at angle ``theta``."""
    u0, u1 = msg
    c = math.cos(2 * theta)
    s = math.sin(2 * theta)
    return (-1j * (u0 * c + u1 * s), -1j * (u0 * s - u1 * c))


def eom_angle(reflectivity: float) -> float:
    """Wave-plate axis angle that gives an EOM the requested reflectivity.

    Polarization rotated by ``2*theta`` sends a fraction ``sin^2(2*theta)`` of
    each linear polarization to the other port of the analyzing prism, so
    ``reflectivity = sin^2(2*theta)``.  A reflectivity of 1/2 gives the
    pi/8 axis of a fully driven modulator.
    """
    if not 0.0 <= reflectivity <= 1.0:
        raise ValueError("reflectivity must lie in [0, 1]")
    return 0.5 * math.asin(math.sqrt(reflectivity))


def eom_transform(msg, active: bool, reflectivity: float = 0.5):
    """Electro-optic modulator: a half-wave plate when driven, identity otherwise."""
    if not active:
        return msg
    return hwp_transform(msg, eom_angle(reflectivity))


def phase_shift(msg: Message, chi: float) -> Message:
    return advance_phase(msg, chi)


def spin_analyzer_select(msg, r: float) -> bool:
    """Pass the particle iff its squared spin-up amplitude exceeds ``r``."""
    m0 = msg[0]
    return m0.real * m0.real + m0.imag * m0.imag > r


def malus_pbs_sample(xi_prime, r):
    """Polarizer outcome +1/-1 with ``P(+1) = cos^2(xi_prime)``.  Works on arrays."""
    x = np.where(np.asarray(r) <= np.cos(xi_prime) ** 2, 1, -1)
    return int(x) if x.ndim == 0 else x


def time_tag_sample(xi_prime, T0: float, r):
    """Delay uniform on ``[0, T0*sin^4(2*xi_prime)]``.  Works on arrays."""
    if not T0 > 0:
        raise ValueError("T0 must be positive")
    t = T0 * np.sin(2 * np.asarray(xi_prime)) ** 4 * np.asarray(r)
    return float(t) if t.ndim == 0 else t
