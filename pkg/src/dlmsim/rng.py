"""Reproducible per-component random streams.

Every component of a simulated network draws from its own stream.  A stream is
identified by the run seed plus a stable integer derived from the component's
path name (``"mzi/bs2"``), so adding a component never shifts the numbers seen
by the others.
"""

from __future__ import annotations

import hashlib

import numpy as np

_BUFFER = 1024


def stream_id_for(path: str) -> int:
    """Stable 63-bit identifier for a component path."""
    digest = hashlib.blake2b(path.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little") >> 1


class RngStream:
    """Uniform [0, 1) numbers from a counter-based generator.

    Numbers are buffered, but the sequence does not depend on how they are
    requested: ``next_uniform`` called n times gives the same values as
    ``uniforms(n)``.
    """

    def __init__(self, seed: int, stream_id: int | str = 0):
        if isinstance(stream_id, str):
            stream_id = stream_id_for(stream_id)
        if seed < 0 or stream_id < 0:
            raise ValueError("seed and stream_id must be non-negative")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self._gen = np.random.Generator(np.random.Philox(seq))
        self._buf = np.empty(0)
        self._pos = 0

    def next_uniform(self) -> float:
        if self._pos >= self._buf.size:
            self._buf = self._gen.random(_BUFFER)
            self._pos = 0
        value = self._buf[self._pos]
        self._pos += 1
        return float(value)

    def uniforms(self, n: int) -> np.ndarray:
        """The next ``n`` numbers of the stream as an array."""
        if n < 0:
            raise ValueError("n must be non-negative")
        head = self._buf[self._pos : self._pos + n]
        self._pos += head.size
        rest = n - head.size
        if rest == 0:
            return head.copy()
        return np.concatenate([head, self._gen.random(rest)])

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.next_uniform()

    def bit(self) -> int:
        return 1 if self.next_uniform() >= 0.5 else 0

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


def next_uniform(stream: RngStream) -> float:
    return stream.next_uniform()


class StreamFactory:
    """Hands out one stream per component path under a common run seed."""

    def __init__(self, seed: int, prefix: str = ""):
        self.seed = int(seed)
        self.prefix = prefix

    def stream(self, name: str) -> RngStream:
        return RngStream(self.seed, stream_id_for(self.prefix + name))

    def child(self, name: str) -> StreamFactory:
        return StreamFactory(self.seed, f"{self.prefix}{name}/")
