"""EPRB experiment with photon pairs, random analyzer settings and time tags.

The source emits pairs with orthogonal polarizations ``xi`` and ``xi + pi/2``,
``xi`` uniform on [0, 2*pi).  At station ``i`` an EOM rotates the
polarization by the setting ``theta_i`` (one of two angles, chosen at random
per photon); the polarizer sends the photon to the +1 detector with
probability ``cos^2`` of the rotated angle and a time tag is drawn uniformly
on ``[0, T0 * sin^4(2 * angle)]`` after the emission time.

Each station only uses the photon it receives and its own random streams,
so station 1 output does not change when station 2 settings change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..analysis import StationData, chsh_from_table, coincidence_count, correlations
from ..components import malus_pbs_sample, time_tag_sample
from ..rng import StreamFactory
from .base import ExperimentConfig, require, require_count

_CHUNK = 100_000


@dataclass(frozen=True)
class EPRBConfig(ExperimentConfig):
    """Angles in degrees, times in ns.  Pairs leave the source every ``pair_interval_ns``."""

    pairs: int = 300_000
    T0: float = 1000.0
    angles1_deg: tuple = (0.0, 45.0)
    angles2_deg: tuple = (22.5, 67.5)
    windows_ns: tuple = (2.0, 50.0, 200.0)
    pair_interval_ns: float = 100_000.0

    def validate(self):
        require_count(self.pairs, "pairs")
        require(self.T0 > 0, "T0 must be positive")
        require(len(self.angles1_deg) >= 1 and len(self.angles2_deg) >= 1, "each station needs at least one angle")
        for a in (*self.angles1_deg, *self.angles2_deg):
            require(isinstance(a, (int, float)) and math.isfinite(a), "angles must be finite numbers")
        require(len(self.windows_ns) >= 1, "at least one coincidence window is needed")
        require(all(w >= 0 for w in self.windows_ns), "windows must be non-negative")
        require(self.pair_interval_ns > 0, "pair_interval_ns must be positive")


def _station(streams: StreamFactory, xi: np.ndarray, emitted: np.ndarray, angles_deg, T0: float) -> StationData:
    n = xi.size
    settings = streams.stream("settings").uniforms(n)
    choice = np.minimum((settings * len(angles_deg)).astype(int), len(angles_deg) - 1)
    theta = np.radians(np.asarray(angles_deg, dtype=float))[choice]
    rotated = xi - theta
    x = malus_pbs_sample(rotated, streams.stream("polarizer").uniforms(n))
    t = emitted + time_tag_sample(rotated, T0, streams.stream("time-tag").uniforms(n))
    return StationData(x, t, np.degrees(theta))


def run_eprb(config: EPRBConfig, seed: int = 0) -> tuple[StationData, StationData]:
    """Generate both stations' records (``theta`` in degrees)."""
    streams = StreamFactory(seed, "eprb/")
    xi = 2 * math.pi * streams.stream("source").uniforms(config.pairs)
    emitted = config.pair_interval_ns * np.arange(config.pairs, dtype=float)
    s1 = _station(streams.child("station1"), xi, emitted, config.angles1_deg, config.T0)
    s2 = _station(streams.child("station2"), xi + math.pi / 2, emitted, config.angles2_deg, config.T0)
    return s1, s2


@dataclass
class WindowSummary:
    window: float
    table: object
    S: float

    def rows(self):
        for (a1, a2) in self.table.settings():
            c = self.table.pair(a1, a2)
            e1, e2, e = correlations(c)
            yield a1, a2, c, e1, e2, e


def analyze_windows(s1: StationData, s2: StationData, config: EPRBConfig, offset: float = 0.0) -> list[WindowSummary]:
    """Coincidence tables and CHSH value for every window in ``config``.

    The CHSH value uses the first two angles of each station; it is NaN
    when a station has fewer than two angles.
    """
    out = []
    for w in config.windows_ns:
        table = coincidence_count(s1, s2, w, offset)
        S = math.nan
        if len(config.angles1_deg) >= 2 and len(config.angles2_deg) >= 2:
            a1, a1p = (float(a) for a in config.angles1_deg[:2])
            a2, a2p = (float(a) for a in config.angles2_deg[:2])
            try:
                S = chsh_from_table(table, a1, a1p, a2, a2p)
            except ZeroDivisionError:
                S = math.nan
        out.append(WindowSummary(float(w), table, S))
    return out
