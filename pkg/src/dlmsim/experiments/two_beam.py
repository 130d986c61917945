"""Two-slit interference with adaptive detectors on a semicircular screen.

Messengers leave one of two slits in a random direction, fly to the screen
and are fed to the detector whose window they hit.  The message is the phase
accumulated along the flight path.  Nothing interferes in flight; the fringe
pattern appears because each detector learns the average phase of what it
receives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..detectors import DetectorScreen
from ..messengers import (
    ALTERNATING,
    FIXED_SOURCE,
    RANDOM_SOURCE,
    EmissionMode,
    two_beam_emit,
    two_beam_emit_batch,
    two_beam_geometry,
    two_beam_geometry_batch,
)
from ..rng import StreamFactory
from .base import ExperimentConfig, require, require_count, require_gamma

BOTH = "both"
BLOCKED = "blocked"
ALTERNATE = "alternating"

_CHUNK = 200_000


@dataclass(frozen=True)
class TwoBeamConfig(ExperimentConfig):
    """Parameters of the two-slit run; lengths in units of c/f.

    ``mode`` is ``both`` (slit chosen at random per messenger), ``blocked``
    (half the messengers from each slit in two separate runs, detectors reset
    in between, counts summed) or ``alternating`` (groups of ``group_size``
    messengers from each slit in turn, no reset).
    """

    events: int = 1_000_000
    gamma: float = 0.999
    a: float = 1.0
    d: float = 5.0
    X: float = 75.0
    n_detectors: int = 181
    mode: str = BOTH
    group_size: int = 1000

    def validate(self):
        require_count(self.events, "events")
        require_gamma(self.gamma)
        require(self.a > 0, "a must be positive")
        require(self.d > self.a, "d must exceed a")
        require(self.X > self.d / 2 + self.a / 2, "X must exceed the source extent")
        require_count(self.n_detectors, "n_detectors")
        require(self.n_detectors >= 2, "n_detectors must be at least 2")
        require(self.mode in (BOTH, BLOCKED, ALTERNATE), f"unknown mode {self.mode!r}")
        require_count(self.group_size, "group_size")


@dataclass
class TwoBeamResult:
    theta_deg: np.ndarray
    arrivals: np.ndarray
    clicks: np.ndarray
    emitted: int

    @property
    def detected_fraction(self) -> float:
        return float(self.clicks.sum()) / self.emitted


def _run_segment(screen, source, config, mode, n, start_index, vectorized):
    if vectorized:
        done = 0
        while done < n:
            m = min(_CHUNK, n - done)
            y, beta = two_beam_emit_batch(source, config.a, config.d, mode, m, start_index + done)
            theta, t = two_beam_geometry_batch(y, beta, config.X)
            screen.detect_batch(np.degrees(theta), np.exp(2j * math.pi * t))
            done += m
        return
    for k in range(n):
        y, beta = two_beam_emit(source, config.a, config.d, mode, start_index + k)
        theta, t = two_beam_geometry(y, beta, config.X)
        screen.detect(math.degrees(theta), complex(math.cos(2 * math.pi * t), math.sin(2 * math.pi * t)))


def run_two_beam(config: TwoBeamConfig, seed: int = 0, vectorized: bool = True) -> TwoBeamResult:
    """Simulate ``config.events`` messengers and return per-detector totals.

    ``vectorized=False`` runs the literal one-messenger-at-a-time loop; both
    paths consume the random streams identically.
    """
    streams = StreamFactory(seed, "two-beam/")
    source = streams.stream("source")
    n = config.events
    if config.mode == BLOCKED:
        screens = []
        for which, count in ((1, n - n // 2), (2, n // 2)):
            screen = DetectorScreen(config.gamma, streams.child(f"slit{which}"), config.n_detectors)
            _run_segment(screen, source, config, EmissionMode(FIXED_SOURCE, source=which), count, 0, vectorized)
            screens.append(screen)
        arrivals = sum(s.arrivals for s in screens)
        clicks = sum(s.clicks for s in screens)
        positions = screens[0].positions_deg
    else:
        mode = EmissionMode(RANDOM_SOURCE) if config.mode == BOTH else EmissionMode(ALTERNATING, group=config.group_size)
        screen = DetectorScreen(config.gamma, streams, config.n_detectors)
        _run_segment(screen, source, config, mode, n, 0, vectorized)
        arrivals, clicks, positions = screen.arrivals, screen.clicks, screen.positions_deg
    return TwoBeamResult(positions.copy(), np.asarray(arrivals), np.asarray(clicks), n)
