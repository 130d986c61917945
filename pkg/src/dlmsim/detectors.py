"""Detector models: the ideal counter and the adaptive threshold detector.

The adaptive detector keeps an exponential average ``v`` of the messages it
receives (stored as a complex number, like scalar messages) and clicks when
``|v|^2`` exceeds a uniform random number.  Messages that arrive in phase
build up ``|v|`` and are detected; messages with scrambled phases are not.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import lfilter

from .rng import RngStream, StreamFactory
from .validation import check_positive_int


class AdaptiveDetector:
    def __init__(self, gamma: float, stream: RngStream, v: complex = 0j):
        if not 0.0 <= gamma < 1.0:
            raise ValueError("gamma must lie in [0, 1)")
        self.gamma = gamma
        self.stream = stream
        self.v = complex(v)
        self.clicks = 0
        self.arrivals = 0

    def detect(self, msg: complex) -> int:
        """Feed one message; returns 1 on a click and 0 otherwise."""
        return adaptive_detect(self, msg, self.stream.next_uniform())


def adaptive_detect(det: AdaptiveDetector, msg: complex, r: float) -> int:
    """Update the detector with ``msg`` and compare ``|v|^2`` with ``r``.

    ``det`` is updated in place and the output bit is returned.
    """
    g = det.gamma
    det.v = g * det.v + (1.0 - g) * msg
    det.arrivals += 1
    w = 1 if det.v.real * det.v.real + det.v.imag * det.v.imag > r else 0
    det.clicks += w
    return w


class ParticleCounter:
    """Ideal detector: every arriving messenger is counted."""

    def __init__(self):
        self.count = 0

    def detect(self, msg=None) -> int:
        return counter_detect(self, msg)


def counter_detect(counter: ParticleCounter, msg=None) -> int:
    counter.count += 1
    return 1


class DetectorScreen:
    """A half circle of adaptive detectors at equal angular spacing.

    Detector ``k`` sits at ``-90 + k*spacing`` degrees and accepts angles in
    ``[position - spacing/2, position + spacing/2)``.  Each detector owns a
    random stream ``screen/<k>`` under ``streams``.
    """

    def __init__(self, gamma: float, streams: StreamFactory, n_detectors: int = 181, initial_v: complex = 0j):
        n = check_positive_int(n_detectors, name="n_detectors")
        if n < 2:
            raise ValueError("a screen needs at least two detectors")
        self.n_detectors = n
        self.spacing = 180.0 / (n - 1)
        self.positions_deg = -90.0 + self.spacing * np.arange(n)
        self.detectors = [AdaptiveDetector(gamma, streams.stream(f"screen/{k}"), initial_v) for k in range(n)]

    @property
    def gamma(self) -> float:
        return self.detectors[0].gamma

    def route(self, theta_deg):
        """Index of the detector whose window contains ``theta_deg`` (scalar or array)."""
        theta = np.asarray(theta_deg, dtype=float)
        low = -90.0 - self.spacing / 2
        if np.any(theta < low) or np.any(theta >= 90.0 + self.spacing / 2) or np.any(np.isnan(theta)):
            raise ValueError("angle outside the screen")
        index = np.floor((theta - low) / self.spacing).astype(int)
        index = np.clip(index, 0, self.n_detectors - 1)
        return int(index) if index.ndim == 0 else index

    def detect(self, theta_deg: float, msg: complex) -> tuple[int, int]:
        """Route one messenger; returns ``(detector index, click)``."""
        k = self.route(theta_deg)
        return k, self.detectors[k].detect(msg)

    def detect_batch(self, theta_deg, msgs) -> np.ndarray:
        """Feed many messengers in order; returns the click bit of each.

        Detectors do not interact, so each detector's subsequence of messages
        is filtered in one pass.  The result equals feeding the messengers one
        by one through ``detect``.
        """
        index = self.route(theta_deg)
        msgs = np.asarray(msgs, dtype=complex)
        clicks = np.zeros(index.size, dtype=np.int8)
        order = np.argsort(index, kind="stable")
        bounds = np.searchsorted(index[order], np.arange(self.n_detectors + 1))
        for k, det in enumerate(self.detectors):
            sel = order[bounds[k] : bounds[k + 1]]
            if sel.size == 0:
                continue
            g = det.gamma
            v, _ = lfilter([1.0 - g], [1.0, -g], msgs[sel], zi=[g * det.v])
            r = det.stream.uniforms(sel.size)
            hit = (v.real * v.real + v.imag * v.imag) > r
            clicks[sel] = hit
            det.v = complex(v[-1])
            det.arrivals += sel.size
            det.clicks += int(hit.sum())
        return clicks

    @property
    def arrivals(self) -> np.ndarray:
        return np.array([d.arrivals for d in self.detectors])

    @property
    def clicks(self) -> np.ndarray:
        return np.array([d.clicks for d in self.detectors])


def screen_route(screen: DetectorScreen, theta_deg: float) -> int:
    return screen.route(theta_deg)


def efficiency(clicks: int, arrivals: int) -> float:
    return math.nan if arrivals == 0 else clicks / arrivals
