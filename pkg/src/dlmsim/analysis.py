"""Statistics computed from simulated event data.

Covers coincidence counting between two time-tagged stations, the clock
offset estimate, correlations and the CHSH combination, the Boole triple
check, fringe visibility, which-path distinguishability, the neutron Bell
correlation and a one-parameter amplitude fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted


class UndefinedCorrelationError(ZeroDivisionError):
    """A correlation was requested from zero counts."""


@dataclass
class StationData:
    """Events recorded by one station: outcome ``x``, time tag ``t`` and setting ``theta``."""

    x: np.ndarray
    t: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.int8)
        self.t = np.asarray(self.t, dtype=float)
        self.theta = np.asarray(self.theta, dtype=float)
        if not (self.x.shape == self.t.shape == self.theta.shape) or self.x.ndim != 1:
            raise ValueError("x, t and theta must be 1-d arrays of equal length")
        if self.x.size and not np.all(np.abs(self.x) == 1):
            raise ValueError("outcomes must be +1 or -1")

    def __len__(self) -> int:
        return self.x.size


@dataclass
class CoincidenceTable:
    """Coincidence counts per setting pair.

    ``counts[(a1, a2)]`` is a 2x2 integer array indexed ``[i, j]`` with index 0
    meaning outcome +1 and index 1 meaning -1, so ``[0, 1]`` is C+-.
    """

    window: float
    offset: float
    counts: dict = field(default_factory=dict)

    def pair(self, a1: float, a2: float) -> np.ndarray:
        return self.counts.get((a1, a2), np.zeros((2, 2), dtype=np.int64))

    @property
    def total(self) -> int:
        return int(sum(c.sum() for c in self.counts.values()))

    def settings(self) -> list[tuple[float, float]]:
        return sorted(self.counts)


def match_events(t1, t2, window: float, offset: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Pair time tags with ``|t1 + offset - t2| < window``.

    Station-1 events are taken in time order and each claims the nearest
    still-unused station-2 event inside the window (earlier one on a tie).
    Every event is used at most once.  Returns index arrays into ``t1`` and
    ``t2``.
    """
    if window < 0:
        raise ValueError("window must be non-negative")
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    order1 = np.argsort(t1, kind="stable")
    order2 = np.argsort(t2, kind="stable")
    s1 = (t1[order1] + offset).tolist()
    s2 = t2[order2].tolist()
    used = bytearray(len(s2))
    n2 = len(s2)
    lo = 0
    first, second = [], []
    for i, target in enumerate(s1):
        while lo < n2 and (used[lo] or s2[lo] <= target - window):
            lo += 1
        best = -1
        best_gap = window
        j = lo
        while j < n2 and s2[j] < target + window:
            if not used[j]:
                gap = abs(s2[j] - target)
                if gap < best_gap:
                    best, best_gap = j, gap
            j += 1
        if best >= 0:
            used[best] = 1
            first.append(i)
            second.append(best)
    return order1[np.array(first, dtype=np.intp)], order2[np.array(second, dtype=np.intp)]


def coincidence_count(station1: StationData, station2: StationData, window: float, offset: float = 0.0) -> CoincidenceTable:
    i1, i2 = match_events(station1.t, station2.t, window, offset)
    table = CoincidenceTable(window, offset)
    if i1.size == 0:
        return table
    a1 = station1.theta[i1]
    a2 = station2.theta[i2]
    cell = 2 * (station1.x[i1] < 0) + (station2.x[i2] < 0)
    for s1 in np.unique(a1):
        for s2 in np.unique(a2):
            sel = (a1 == s1) & (a2 == s2)
            if sel.any():
                c = np.bincount(cell[sel], minlength=4).reshape(2, 2)
                table.counts[(float(s1), float(s2))] = c.astype(np.int64)
    return table


class DelayEstimate(NamedTuple):
    offset: float
    confident: bool


def delta_g_estimate(station1: StationData, station2: StationData, bin_width: float = 0.5, max_lag: float = 1000.0) -> DelayEstimate:
    """Offset to add to station-1 tags so that the ``t1 - t2`` histogram peaks at zero.

    Only differences within ``max_lag`` are histogrammed.  Bins are centred
    on multiples of ``bin_width``.
    """
    if len(station1) == 0 or len(station2) == 0:
        raise ValueError("both stations need events")
    if not bin_width > 0 or not max_lag > 0:
        raise ValueError("bin_width and max_lag must be positive")
    t1 = np.sort(station1.t)
    t2 = np.sort(station2.t)
    lo = np.searchsorted(t2, t1 - max_lag, side="left")
    hi = np.searchsorted(t2, t1 + max_lag, side="right")
    reps = hi - lo
    if reps.sum() == 0:
        return DelayEstimate(0.0, False)
    owner = np.repeat(np.arange(t1.size), reps)
    start = np.repeat(lo - np.cumsum(reps) + reps, reps)
    j = start + np.arange(owner.size)
    diffs = t1[owner] - t2[j]
    n_half = math.ceil(max_lag / bin_width)
    edges = (np.arange(-n_half, n_half + 2) - 0.5) * bin_width
    hist, _ = np.histogram(diffs, bins=edges)
    if hist.max() == hist.min():
        return DelayEstimate(0.0, False)
    centre = (-n_half + int(np.argmax(hist))) * bin_width
    return DelayEstimate(-centre, True)


def correlations(counts) -> tuple[float, float, float]:
    """Single-particle averages ``E1``, ``E2`` and the correlation ``E`` from a 2x2 count table."""
    c = np.asarray(counts)
    cpp, cpm, cmp_, cmm = int(c[0, 0]), int(c[0, 1]), int(c[1, 0]), int(c[1, 1])
    total = cpp + cpm + cmp_ + cmm
    if total == 0:
        raise UndefinedCorrelationError("no coincidences for this setting pair")
    e1 = (cpp - cmm + cpm - cmp_) / total
    e2 = (cpp - cmm - cpm + cmp_) / total
    e = (cpp + cmm - cpm - cmp_) / total
    return e1, e2, e


def chsh_s(e11: float, e12: float, e21: float, e22: float) -> float:
    """``E(a1,a2) - E(a1,a2') + E(a1',a2) + E(a1',a2')``."""
    for e in (e11, e12, e21, e22):
        if not -1.0 <= e <= 1.0:
            raise ValueError("correlations must lie in [-1, 1]")
    return e11 - e12 + e21 + e22


def chsh_from_table(table: CoincidenceTable, a1: float, a1p: float, a2: float, a2p: float) -> float:
    def e(x, y):
        return correlations(table.pair(x, y))[2]

    return chsh_s(e(a1, a2), e(a1, a2p), e(a1p, a2), e(a1p, a2p))


class TripleCheck(NamedTuple):
    f_ab: float
    f_ac: float
    f_bc: float
    holds: bool


def boole_triple_check(triples) -> TripleCheck:
    """Pair averages of +1/-1 triples and whether ``|F_ab +- F_ac| <= 1 +- F_bc`` holds."""
    arr = np.asarray(triples)
    if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] == 0:
        raise ValueError("need a non-empty list of triples")
    # integer sums keep the check exact
    n = arr.shape[0]
    ab = int(np.sum(arr[:, 0] * arr[:, 1]))
    ac = int(np.sum(arr[:, 0] * arr[:, 2]))
    bc = int(np.sum(arr[:, 1] * arr[:, 2]))
    holds = abs(ab + ac) <= n + bc and abs(ab - ac) <= n - bc
    return TripleCheck(ab / n, ac / n, bc / n, holds)


def fringe_visibility(phi, fraction) -> float:
    """Visibility of a sinusoidal fringe with period 2*pi in ``phi``.

    Fits ``c + a cos(phi) + b sin(phi)`` by least squares and returns
    ``sqrt(a^2 + b^2) / c``, which is ``(max - min)/(max + min)`` of the fit.
    """
    phi = np.asarray(phi, dtype=float)
    y = np.asarray(fraction, dtype=float)
    if phi.size < 4:
        raise ValueError("a fringe fit needs at least four phase points")
    design = np.column_stack([np.ones_like(phi), np.cos(phi), np.sin(phi)])
    (c, a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
    return math.hypot(a, b) / c


def distinguishability(p_first_path: float, p_second_path: float) -> float:
    """Which-path distinguishability from detection probabilities with one arm blocked.

    ``p_first_path`` is the probability that detector D0 fires when only the
    first arm is open, ``p_second_path`` the same with only the second arm
    open.
    """
    return abs(p_first_path - p_second_path)


def path_label_asymmetry(n_path0: int, n_path1: int) -> float:
    """``|N0 - N1| / (N0 + N1)`` for counts at one detector split by path label."""
    total = n_path0 + n_path1
    if total == 0:
        raise UndefinedCorrelationError("no counts")
    return abs(n_path0 - n_path1) / total


def neutron_bell_correlation(n1: int, n2: int, n3: int, n4: int) -> float:
    """``(N1 + N2 - N3 - N4) / (N1 + N2 + N3 + N4)``.

    The counts are taken at (alpha, chi), (alpha+pi, chi+pi), (alpha+pi, chi)
    and (alpha, chi+pi).
    """
    if min(n1, n2, n3, n4) < 0:
        raise ValueError("counts must be non-negative")
    total = n1 + n2 + n3 + n4
    if total == 0:
        raise UndefinedCorrelationError("no counts")
    return (n1 + n2 - n3 - n4) / total


def neutron_chsh(e_a_c: float, e_a_cp: float, e_ap_c: float, e_ap_cp: float) -> float:
    """``E(a,c) + E(a,c') - E(a',c) + E(a',c')`` for spin rotator angle a and phase c."""
    return e_a_c + e_a_cp - e_ap_c + e_ap_cp


# -- fitting -----------------------------------------------------------------


class AmplitudeFit(RegressorMixin, BaseEstimator):
    """Least-squares fit of ``counts = A * model(x)`` with a single amplitude.

    ``score`` (from ``RegressorMixin``) is the coefficient of determination.
    """

    def __init__(self, model=None):
        self.model = model

    def _shape(self, x):
        if self.model is None:
            raise ValueError("a model function is required")
        return np.asarray(self.model(np.asarray(x, dtype=float)), dtype=float).ravel()

    def fit(self, X, y):
        m = self._shape(X)
        y = np.asarray(y, dtype=float).ravel()
        if m.shape != y.shape:
            raise ValueError("X and y must have the same length")
        denom = float(m @ m)
        if denom == 0.0:
            raise ValueError("model is identically zero")
        self.amplitude_ = float(m @ y) / denom
        self.residual_ = float(np.sqrt(np.mean((y - self.amplitude_ * m) ** 2)))
        return self

    def predict(self, X):
        check_is_fitted(self, "amplitude_")
        return self.amplitude_ * self._shape(X)


def fit_amplitude(x, counts, model) -> tuple[float, float]:
    """Best amplitude and RMS residual of ``counts ~ A * model(x)``."""
    fit = AmplitudeFit(model).fit(x, counts)
    return fit.amplitude_, fit.residual_


def fourier_component(x, weights, frequency: float) -> float:
    """``|sum w_k exp(i f x_k)| / sum w_k``: relative strength of one spatial frequency."""
    w = np.asarray(weights, dtype=float)
    total = w.sum()
    if total == 0:
        return 0.0
    return float(abs(np.sum(w * np.exp(1j * frequency * np.asarray(x, dtype=float)))) / total)
