"""Neutron interferometry: the triple-Laue interferometer and its Bell-test variant.

Splitter layout (ports: 0 = transmitted, 1 = reflected):

    source -> BS0 -+- port 0 -> BS1 -+- port 0: leaves, not counted
                   |                 +- port 1: phase chi0 -> BS3 input 0
                   +- port 1 -> BS2 -+- port 0: leaves, not counted
                                     +- port 1: phase chi1 -> BS3 input 1
    BS3 port 0 -> H beam, BS3 port 1 -> O beam

The Bell variant rotates the spin on the two arms after BS0 (by -pi/2 on
the transmitted arm, +pi/2 on the reflected arm, about y) and puts a spin
rotator (angle alpha about x) and a spin analyzer behind the O beam.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..analysis import neutron_bell_correlation, neutron_chsh
from ..components import NEUTRON, BeamSplitter, SplitterKind, spin_analyzer_select
from ..messengers import neutron_message, su2_matrix
from ..rng import StreamFactory
from .base import ExperimentConfig, phase_grid, require, require_count, require_gamma


class _Interferometer:
    def __init__(self, streams: StreamFactory, gamma: float, reflectivity: float, spin_turns: bool):
        kind = SplitterKind(NEUTRON, reflectivity)
        self.splitters = [BeamSplitter(kind, gamma, streams.stream(f"bs{k}"), 2) for k in range(4)]
        self.turns = (su2_matrix("y", -math.pi / 2), su2_matrix("y", math.pi / 2)) if spin_turns else None

    def send(self, msg, phase0: complex, phase1: complex):
        """Propagate one neutron; returns 0 (H beam), 1 (O beam) with the message, or None if lost."""
        bs0, bs1, bs2, bs3 = self.splitters
        arm, msg = bs0.process(0, msg)
        if self.turns is not None:
            (a, b), (c, d) = self.turns[arm]
            msg = (a * msg[0] + b * msg[1], c * msg[0] + d * msg[1])
        port, msg = (bs1 if arm == 0 else bs2).process(0, msg)
        if port == 0:
            return None
        phase = phase0 if arm == 0 else phase1
        beam, msg = bs3.process(arm, (msg[0] * phase, msg[1] * phase))
        return beam, msg


@dataclass(frozen=True)
class NeutronMZIConfig(ExperimentConfig):
    """``noise_deg`` is the half-width of the uniform per-neutron phase noise on both spinor phases."""

    events_per_point: int = 100_000
    gamma: float = 0.99
    reflectivity: float = 0.2
    chi_step_deg: float = 30.0
    n_points: int = 13
    noise_deg: float = 0.0
    spin_theta_deg: float = 0.0

    def validate(self):
        require_count(self.events_per_point, "events_per_point")
        require_gamma(self.gamma)
        require(self.gamma > 0, "gamma must be positive for a learning splitter")
        require(0.0 <= self.reflectivity <= 1.0, "reflectivity must lie in [0, 1]")
        require_count(self.n_points, "n_points")
        require(self.noise_deg >= 0, "noise_deg must be non-negative")


@dataclass
class NeutronMZIResult:
    chi_deg: np.ndarray
    n_o: np.ndarray
    n_h: np.ndarray
    events_per_point: int


def _source_message(stream, noise: float, theta: float):
    if noise == 0.0:
        return neutron_message(0.0, 0.0, theta)
    d1 = noise * (2 * stream.next_uniform() - 1)
    d2 = noise * (2 * stream.next_uniform() - 1)
    return neutron_message(d1, d2, theta)


def run_neutron_mzi(config: NeutronMZIConfig, seed: int = 0) -> NeutronMZIResult:
    """Sweep the phase difference; the interferometer is rebuilt for every point."""
    streams = StreamFactory(seed, "neutron-mzi/")
    chis = phase_grid(config.chi_step_deg, config.n_points)
    noise = math.radians(config.noise_deg)
    theta = math.radians(config.spin_theta_deg)
    n_o = np.zeros(len(chis), dtype=np.int64)
    n_h = np.zeros(len(chis), dtype=np.int64)
    for row, chi_deg in enumerate(chis):
        point = streams.child(f"point{row}")
        net = _Interferometer(point, config.gamma, config.reflectivity, spin_turns=False)
        source = point.stream("source")
        phase0 = cmath.exp(1j * math.radians(chi_deg))
        for _ in range(config.events_per_point):
            hit = net.send(_source_message(source, noise, theta), phase0, 1.0)
            if hit is None:
                continue
            if hit[0] == 0:
                n_h[row] += 1
            else:
                n_o[row] += 1
    return NeutronMZIResult(np.array(chis), n_o, n_h, config.events_per_point)


# -- Bell test -----------------------------------------------------------------


@dataclass(frozen=True)
class NeutronBellConfig(ExperimentConfig):
    """Grid of spin-rotator angles ``alpha`` and phase shifts ``chi``.

    Every correlation needs four counts, at (alpha, chi), (alpha+180, chi+180),
    (alpha+180, chi) and (alpha, chi+180), each from ``events_per_count``
    neutrons.  With ``random_chi`` the phase is drawn per neutron from
    ``chi_deg`` and both ``chi`` and ``chi+180`` (if missing) instead of being
    held fixed for a run.
    """

    events_per_count: int = 10_000
    gamma: float = 0.99
    reflectivity: float = 0.2
    alpha_deg: tuple = (0.0, 90.0)
    chi_deg: tuple = (45.0, -45.0)
    random_chi: bool = False

    def validate(self):
        require_count(self.events_per_count, "events_per_count")
        require_gamma(self.gamma)
        require(self.gamma > 0, "gamma must be positive for a learning splitter")
        require(0.0 <= self.reflectivity <= 1.0, "reflectivity must lie in [0, 1]")
        require(len(self.alpha_deg) > 0 and len(self.chi_deg) > 0, "alpha and chi grids must be non-empty")
        require(isinstance(self.random_chi, bool), "random_chi must be true or false")


@dataclass
class NeutronBellResult:
    alpha_deg: np.ndarray
    chi_deg: np.ndarray
    # counts[i, j] = (N1, N2, N3, N4) for alpha_deg[i], chi_deg[j]
    counts: np.ndarray

    @property
    def correlation(self) -> np.ndarray:
        out = np.empty(self.counts.shape[:2])
        for idx in np.ndindex(out.shape):
            out[idx] = neutron_bell_correlation(*(int(c) for c in self.counts[idx]))
        return out

    def chsh(self, alpha: float, chi: float, alpha_p: float, chi_p: float) -> float:
        corr = self.correlation

        def index(grid, angle):
            hits = [k for k, g in enumerate(grid) if _key(g) == _key(angle)]
            if not hits:
                raise KeyError(f"angle {angle} not on the grid")
            return hits[0]

        def e(a, c):
            return corr[index(self.alpha_deg, a), index(self.chi_deg, c)]

        return neutron_chsh(e(alpha, chi), e(alpha, chi_p), e(alpha_p, chi), e(alpha_p, chi_p))


def _key(angle_deg: float) -> float:
    return round(float(angle_deg) % 360.0, 9)


class _BellSetup:
    """Interferometer, spin rotator and analyzer; one instance serves a whole sweep."""

    def __init__(self, streams: StreamFactory, config: NeutronBellConfig):
        self.net = _Interferometer(streams, config.gamma, config.reflectivity, spin_turns=True)
        self.choose = streams.stream("chi-choice")
        self.analyzer = streams.stream("analyzer")

    def count(self, alpha_deg: float, chi_values, n_events: int) -> list[int]:
        """Spin-up counts in the O beam for each phase in ``chi_values``.

        With several phases, each neutron meets one of them chosen at random.
        """
        (a, b), (c, d) = su2_matrix("x", math.radians(alpha_deg))
        phases = [cmath.exp(1j * math.radians(x)) for x in chi_values]
        counts = [0] * len(phases)
        up = neutron_message(0.0, 0.0, 0.0)
        send = self.net.send
        for _ in range(n_events):
            k = int(self.choose.next_uniform() * len(phases)) if len(phases) > 1 else 0
            hit = send(up, phases[k], 1.0)
            if hit is None or hit[0] != 1:
                continue
            m0, m1 = hit[1]
            if spin_analyzer_select((a * m0 + b * m1, c * m0 + d * m1), self.analyzer.next_uniform()):
                counts[k] += 1
        return counts


def run_neutron_bell(config: NeutronBellConfig, seed: int = 0) -> NeutronBellResult:
    """Measure all counts with one interferometer whose memory persists through the sweep.

    Points are visited alpha-major; for each point the four counts are taken
    in the order N1..N4.
    """
    setup = _BellSetup(StreamFactory(seed, "neutron-bell/"), config)
    alphas = [float(x) for x in config.alpha_deg]
    chis = [float(x) for x in config.chi_deg]
    counts = np.zeros((len(alphas), len(chis), 4), dtype=np.int64)
    shifts = ((0.0, 0.0), (180.0, 180.0), (180.0, 0.0), (0.0, 180.0))
    if config.random_chi:
        pool = sorted({_key(c) for c in chis} | {_key(c + 180.0) for c in chis})
        measured = {}
        for alpha in sorted({_key(a) for a in alphas} | {_key(a + 180.0) for a in alphas}):
            got = setup.count(alpha, pool, config.events_per_count * len(pool))
            measured.update({(alpha, chi): n for chi, n in zip(pool, got)})
        for i, alpha in enumerate(alphas):
            for j, chi in enumerate(chis):
                counts[i, j] = [measured[(_key(alpha + da), _key(chi + dc))] for da, dc in shifts]
    else:
        for i, alpha in enumerate(alphas):
            for j, chi in enumerate(chis):
                counts[i, j] = [setup.count(alpha + da, [chi + dc], config.events_per_count)[0] for da, dc in shifts]
    return NeutronBellResult(np.array(alphas), np.array(chis), counts)
