"""Deterministic learning machines.

Three processors are provided:

* a scalar machine that turns a number ``u`` in [0, 1] into a +1/-1 event
  sequence whose mean converges to ``2u - 1``;
* a direction machine that learns a unit 2-vector and emits 0/1 events with
  Malus-law frequencies;
* an exponential-average machine, the memory used by beam splitters and
  adaptive detectors.

Each comes as a pure step function on a small state object and as an
estimator-style class with ``fit``/``transform``.  The classes never stop
learning, so ``transform`` advances the internal state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .validation import check_gamma, check_probability, check_stream


@dataclass(frozen=True)
class ScalarDlmState:
    v: float
    gamma: float

    def __post_init__(self):
        check_probability(self.v, name="v")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError("gamma must lie in [0, 1)")


@dataclass(frozen=True)
class DirectionDlmState:
    v0: float
    v1: float
    gamma: float


@dataclass(frozen=True)
class AverageDlmState:
    v: tuple[float, float]
    gamma: float


def scalar_dlm_step(state: ScalarDlmState, u: float) -> tuple[ScalarDlmState, int]:
    """One update of the scalar machine.

    The two candidate states are ``gamma*v`` and ``gamma*v + 1 - gamma``; the
    one closer to ``u`` is kept.  An exact tie keeps the upper candidate.
    """
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"u must lie in [0, 1], got {u!r}")
    g = state.gamma
    low = g * state.v
    high = low + (1.0 - g)
    if abs(high - u) <= abs(low - u):
        return ScalarDlmState(high, g), 1
    return ScalarDlmState(low, g), -1


def born_sample(p: float, r: float) -> int:
    """+1 with probability ``p`` given a uniform draw ``r``."""
    check_probability(p, name="p")
    return 1 if r < p else -1


def _direction_candidates(v0: float, v1: float, g: float):
    s0 = math.sqrt(min(1.0, max(0.0, 1.0 + g * g * (v0 * v0 - 1.0))))
    s1 = math.sqrt(min(1.0, max(0.0, 1.0 + g * g * (v1 * v1 - 1.0))))
    return (
        (s0, g * v1, 0),
        (-s0, g * v1, 0),
        (g * v0, s1, 1),
        (g * v0, -s1, 1),
    )


def direction_dlm_step(state: DirectionDlmState, u) -> tuple[DirectionDlmState, int]:
    """One update of the direction (Malus) machine.

    Output 0 shrinks the second component of the internal vector by ``gamma``,
    output 1 shrinks the first; the other component is fixed by the unit norm.
    Of the four sign choices the one most aligned with ``u`` wins, earlier
    candidates winning exact ties.
    """
    u0, u1 = float(u[0]), float(u[1])
    if abs(math.hypot(u0, u1) - 1.0) > 1e-9:
        raise ValueError("u must be a unit vector")
    best = None
    best_cost = math.inf
    for c0, c1, w in _direction_candidates(state.v0, state.v1, state.gamma):
        cost = -(c0 * u0 + c1 * u1)
        if cost < best_cost:
            best, best_cost = (c0, c1, w), cost
    c0, c1, w = best
    return DirectionDlmState(c0, c1, state.gamma), w


def average_dlm_update(state: AverageDlmState, u) -> AverageDlmState:
    g = state.gamma
    v = state.v
    return AverageDlmState((g * v[0] + (1.0 - g) * u[0], g * v[1] + (1.0 - g) * u[1]), g)


class _SequentialMachine(TransformerMixin, BaseEstimator):
    """Shared plumbing: ``fit`` restarts the machine, ``transform`` continues it."""

    def fit(self, X, y=None):
        self._reset()
        self._consume(X)
        return self

    def fit_transform(self, X, y=None):
        self._reset()
        return self._consume(X)

    def transform(self, X):
        check_is_fitted(self, "state_")
        return self._consume(X)


class ScalarDLM(_SequentialMachine):
    """Scalar learning machine as a transformer of input sequences.

    Parameters:
        gamma: memory parameter in (0, 1).  Values close to 1 give long memory
            and accurate frequencies.
        v0: initial internal value.  ``None`` draws it uniformly from
            ``random_state``.
        random_state: seed or ``RngStream`` used only for initialization.
    """

    def __init__(self, gamma=0.99, v0=None, random_state=None):
        self.gamma = gamma
        self.v0 = v0
        self.random_state = random_state

    def _reset(self):
        gamma = check_gamma(self.gamma)
        if self.v0 is None:
            start = check_stream(self.random_state, default_name="dlm/scalar").next_uniform()
        else:
            start = check_probability(self.v0, name="v0")
        self.state_ = ScalarDlmState(start, gamma)

    def _consume(self, X):
        u_seq = np.asarray(X, dtype=float).ravel()
        out = np.empty(u_seq.size, dtype=np.int8)
        state = self.state_
        for n, u in enumerate(u_seq):
            state, out[n] = scalar_dlm_step(state, float(u))
        self.state_ = state
        return out


class DirectionDLM(_SequentialMachine):
    """Direction learning machine.  Input rows are unit 2-vectors; outputs are 0/1."""

    def __init__(self, gamma=0.99, initial_angle=None, random_state=None):
        self.gamma = gamma
        self.initial_angle = initial_angle
        self.random_state = random_state

    def _reset(self):
        gamma = check_gamma(self.gamma)
        angle = self.initial_angle
        if angle is None:
            stream = check_stream(self.random_state, default_name="dlm/direction")
            angle = 2.0 * math.pi * stream.next_uniform()
        self.state_ = DirectionDlmState(math.cos(angle), math.sin(angle), gamma)

    def _consume(self, X):
        u_seq = np.atleast_2d(np.asarray(X, dtype=float))
        if u_seq.shape[1] != 2:
            raise ValueError("inputs must be 2-vectors")
        out = np.empty(len(u_seq), dtype=np.int8)
        state = self.state_
        for n, u in enumerate(u_seq):
            state, out[n] = direction_dlm_step(state, u)
        self.state_ = state
        return out

    @property
    def angle_(self) -> float:
        check_is_fitted(self, "state_")
        return math.atan2(self.state_.v1, self.state_.v0)


class AverageDLM(_SequentialMachine):
    """Exponential moving average of 2-vectors.

    ``transform`` returns the internal vector after each input.  With
    ``gamma=0`` the machine echoes the last message.
    """

    def __init__(self, gamma=0.99, v0=None, random_state=None):
        self.gamma = gamma
        self.v0 = v0
        self.random_state = random_state

    def _reset(self):
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError("gamma must lie in [0, 1)")
        if self.v0 is None:
            stream = check_stream(self.random_state, default_name="dlm/average")
            angle = 2.0 * math.pi * stream.next_uniform()
            start = (math.cos(angle), math.sin(angle))
        else:
            start = (float(self.v0[0]), float(self.v0[1]))
        self.state_ = AverageDlmState(start, float(self.gamma))

    def _consume(self, X):
        u_seq = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.empty((len(u_seq), 2))
        state = self.state_
        for n, u in enumerate(u_seq):
            state = average_dlm_update(state, u)
            out[n] = state.v
        self.state_ = state
        return out
