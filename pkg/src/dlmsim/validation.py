"""Input checks shared by the estimators and the experiment runners."""

from __future__ import annotations

import math
from numbers import Integral, Real

import numpy as np

from .rng import RngStream


def check_gamma(gamma: float, *, name: str = "gamma") -> float:
    """Memory parameter of a learning machine, strictly inside (0, 1)."""
    if not isinstance(gamma, Real) or not 0.0 < float(gamma) < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {gamma!r}")
    return float(gamma)


def check_probability(p: float, *, name: str) -> float:
    if not isinstance(p, Real) or not 0.0 <= float(p) <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p!r}")
    return float(p)


def check_positive_int(n: int, *, name: str) -> int:
    if isinstance(n, bool) or not isinstance(n, Integral) or n <= 0:
        raise ValueError(f"{name} must be a positive integer, got {n!r}")
    return int(n)


def check_positive(x: float, *, name: str) -> float:
    if not isinstance(x, Real) or not float(x) > 0.0 or not math.isfinite(x):
        raise ValueError(f"{name} must be a positive finite number, got {x!r}")
    return float(x)


def check_unit_vector(v, *, name: str = "vector", atol: float = 1e-9) -> np.ndarray:
    """Return ``v`` as a float or complex 1-d array with norm 1."""
    arr = np.asarray(v)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d vector")
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > atol:
        raise ValueError(f"{name} must have unit norm, got {norm:.6g}")
    return arr


def check_stream(random_state, *, default_name: str) -> RngStream:
    """Accept an ``RngStream``, an integer seed or ``None`` (seed 0)."""
    if isinstance(random_state, RngStream):
        return random_state
    if random_state is None:
        return RngStream(0, default_name)
    if isinstance(random_state, Integral) and not isinstance(random_state, bool):
        return RngStream(int(random_state), default_name)
    raise TypeError(f"random_state must be an int, None or RngStream, got {type(random_state).__name__}")
