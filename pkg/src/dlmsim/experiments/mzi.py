"""Single-photon Mach-Zehnder interferometer built from two learning beam splitters."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..components import PHOTON_5050, BeamSplitter, SplitterKind, phase_shift
from ..detectors import ParticleCounter
from ..rng import StreamFactory
from .base import ExperimentConfig, phase_grid, require, require_count, require_gamma, require_finite


@dataclass(frozen=True)
class MZIConfig(ExperimentConfig):
    """Phase ``phi0`` on arm 0 is stepped; ``phi1`` on arm 1 is fixed.

    The network runs continuously through the sweep: splitter memories are
    not reset when the phase changes.
    """

    events_per_point: int = 10_000
    gamma: float = 0.98
    phi0_start_deg: float = 0.0
    phi0_step_deg: float = 10.0
    n_points: int = 37
    phi1_deg: float = 0.0

    def validate(self):
        require_count(self.events_per_point, "events_per_point")
        require_gamma(self.gamma)
        require_count(self.n_points, "n_points")
        for name in ("phi0_start_deg", "phi0_step_deg", "phi1_deg"):
            require_finite(getattr(self, name), name)
        require(self.gamma > 0, "gamma must be positive for a learning splitter")


@dataclass
class MZIResult:
    phi_deg: np.ndarray
    counts: np.ndarray  # columns N0, N1 (first splitter), N2, N3 (detectors)
    events_per_point: int

    @property
    def n2_fraction(self) -> np.ndarray:
        return self.counts[:, 2] / self.events_per_point


def run_mzi(config: MZIConfig, seed: int = 0) -> MZIResult:
    streams = StreamFactory(seed, "mzi/")
    kind = SplitterKind(PHOTON_5050)
    bs1 = BeamSplitter(kind, config.gamma, streams.stream("bs1"))
    bs2 = BeamSplitter(kind, config.gamma, streams.stream("bs2"))
    detectors = (ParticleCounter(), ParticleCounter())
    # one source phase for the whole run
    psi = 2 * math.pi * streams.stream("source").next_uniform()
    source_msg = cmath.exp(1j * psi)
    phi1 = math.radians(config.phi1_deg)
    phis = phase_grid(config.phi0_step_deg, config.n_points, config.phi0_start_deg)
    counts = np.zeros((len(phis), 4), dtype=np.int64)
    for row, phi0_deg in enumerate(phis):
        shifts = (math.radians(phi0_deg), phi1)
        n0 = n2 = 0
        for _ in range(config.events_per_point):
            path, msg = bs1.process(0, source_msg)
            n0 += path == 0
            out, _ = bs2.process(path, phase_shift(msg, shifts[path]))
            detectors[out].detect()
            n2 += out == 0
        n = config.events_per_point
        counts[row] = (n0, n - n0, n2, n - n2)
    phi = np.array(phis) - config.phi1_deg
    return MZIResult(phi, counts, config.events_per_point)
