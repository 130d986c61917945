"""Delayed-choice Mach-Zehnder experiment with an electro-optic modulator.

Network: source (horizontal polarization) -> half-wave plate at pi/8 ->
polarizing splitter (input) -> two arms, phase ``phi`` on the arm entering
port 0 of the output polarizing splitter -> output splitter (one exit) ->
EOM -> Wollaston prism -> detectors D0, D1.

For every photon, after it has left the input splitter, a random number
decides whether the EOM is driven (closed interferometer, reflectivity
``R``) or idle (open, reflectivity 0).  Photons carry a path label set at the
input splitter.

Which-path distinguishability is measured like in the laboratory: two extra
runs with one arm blocked, D = |P(D0 | arm 0 only) - P(D0 | arm 1 only)|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..analysis import distinguishability, fringe_visibility
from ..components import POLARIZING, BeamSplitter, SplitterKind, eom_transform, hwp_transform, phase_shift
from ..messengers import photon_message
from ..rng import StreamFactory
from .base import ExperimentConfig, phase_grid, require, require_count, require_gamma

OPEN = "open"
CLOSED = "closed"


@dataclass(frozen=True)
class DelayedChoiceConfig(ExperimentConfig):
    events_per_point: int = 10_000
    gamma: float = 0.99
    reflectivity: float = 0.5
    phi_step_deg: float = 10.0
    n_points: int = 36
    which_path_events: int = 40_000

    def validate(self):
        require_count(self.events_per_point, "events_per_point")
        require_gamma(self.gamma)
        require(self.gamma > 0, "gamma must be positive for a learning splitter")
        require(0.0 <= self.reflectivity <= 0.5, "reflectivity must lie in [0, 0.5]")
        require_count(self.n_points, "n_points")
        require(self.n_points >= 4, "a fringe scan needs at least 4 points")
        require_count(self.which_path_events, "which_path_events")


@dataclass
class DelayedChoiceEvents:
    """Per-photon record: detector ``w``, path label ``d`` and the random number ``r`` of the EOM choice."""

    w: np.ndarray
    d: np.ndarray
    r: np.ndarray


@dataclass
class DelayedChoiceResult:
    phi_deg: np.ndarray
    reflectivity: float
    # counts[config][phi index] -> (N0, N1, N0 via path 0, N0 via path 1)
    counts: dict
    blocked_d0_fraction: tuple[float, float]
    events: list

    def d0_fraction(self, config: str = CLOSED) -> np.ndarray:
        c = self.counts[config]
        return c[:, 0] / (c[:, 0] + c[:, 1])

    def visibility(self, config: str = CLOSED) -> float:
        return fringe_visibility(np.radians(self.phi_deg), self.d0_fraction(config))

    def distinguishability(self) -> float:
        return distinguishability(*self.blocked_d0_fraction)


class _Network:
    def __init__(self, streams: StreamFactory, gamma: float, reflectivity: float, psi1: float, psi2: float):
        kind = SplitterKind(POLARIZING)
        self.bs_in = BeamSplitter(kind, gamma, streams.stream("bs-input"), 2)
        self.bs_out = BeamSplitter(kind, gamma, streams.stream("bs-output"), 2)
        self.prism = BeamSplitter(kind, gamma, streams.stream("wollaston"), 2)
        self.choice = streams.stream("eom-choice")
        self.reflectivity = reflectivity
        self.source_msg = hwp_transform(photon_message(psi1, psi2, math.pi / 2), math.pi / 8)

    def send(self, phi: float, blocked: int | None = None):
        """Returns (detector, path label, choice draw) or None when absorbed."""
        port, msg = self.bs_in.process(0, self.source_msg)
        path = port
        r = self.choice.next_uniform()
        if path == blocked:
            return None
        if path == 0:
            msg = phase_shift(msg, phi)
        _, msg = self.bs_out.process(path, msg)
        msg = eom_transform(msg, r < 0.5, self.reflectivity)
        detector, _ = self.prism.process(0, msg)
        return detector, path, r


def run_delayed_choice(config: DelayedChoiceConfig, seed: int = 0, keep_events: bool = False) -> DelayedChoiceResult:
    """Sweep ``phi``; the network is rebuilt for every phase point.

    ``keep_events`` stores the per-photon records (one ``DelayedChoiceEvents``
    per phase point).
    """
    streams = StreamFactory(seed, "delayed-choice/")
    src = streams.stream("source")
    psi1, psi2 = 2 * math.pi * src.next_uniform(), 2 * math.pi * src.next_uniform()
    phis = phase_grid(config.phi_step_deg, config.n_points)
    counts = {OPEN: np.zeros((len(phis), 4), dtype=np.int64), CLOSED: np.zeros((len(phis), 4), dtype=np.int64)}
    events = []
    for row, phi_deg in enumerate(phis):
        net = _Network(streams.child(f"point{row}"), config.gamma, config.reflectivity, psi1, psi2)
        phi = math.radians(phi_deg)
        rec = np.zeros((config.events_per_point, 3))
        for n in range(config.events_per_point):
            detector, path, r = net.send(phi)
            rec[n] = (detector, path, r)
            c = counts[CLOSED if r < 0.5 else OPEN][row]
            c[detector] += 1
            if detector == 0:
                c[2 + path] += 1
        if keep_events:
            events.append(DelayedChoiceEvents(rec[:, 0].astype(np.int8), rec[:, 1].astype(np.int8), rec[:, 2]))
    blocked = []
    for open_arm in (0, 1):
        net = _Network(streams.child(f"arm{open_arm}-only"), config.gamma, config.reflectivity, psi1, psi2)
        n0 = n_total = 0
        for _ in range(config.which_path_events):
            hit = net.send(0.0, blocked=1 - open_arm)
            if hit is None or hit[2] >= 0.5:
                continue
            n_total += 1
            n0 += hit[0] == 0
        blocked.append(n0 / n_total if n_total else math.nan)
    return DelayedChoiceResult(np.array(phis), config.reflectivity, counts, tuple(blocked), events)
