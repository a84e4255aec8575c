"""Deterministic, splittable random streams and Laplace-noise primitives.

Every stochastic component of the package draws from an :class:`RngStream`,
a PCG64 generator keyed by a ``(master_seed, stream_id)`` pair.  Streams
with the same key replay the same draw sequence bit-for-bit; distinct
``stream_id`` values under one master seed give statistically independent
streams (PCG64 seeded through ``SeedSequence(master_seed, spawn_key=(stream_id,))``).

Laplace sampling is inverse-CDF based so that one Laplace variate consumes
exactly one uniform, which keeps replay alignment between the pure-Python
and compiled simulation backends trivial.

All logarithms in this package are natural logarithms.
"""

from __future__ import annotations

import math

import numpy as np

from .exceptions import DomainError, StateError

__all__ = [
    "RngStream",
    "derive_stream",
    "laplace_quantile",
    "laplace_cdf",
    "sample_laplace",
]

# Smallest uniform served to inverse-CDF transforms.  Generator.random()
# yields u in [0, 1); u == 0 is remapped so transforms stay finite.
_MIN_UNIFORM = 2.0**-53

_STREAM_ID_MASK = (1 << 63) - 1


class RngStream:
    """A consumable uniform stream keyed by ``(master_seed, stream_id)``.

    The stream is value-like: re-deriving it from the same key replays the
    same sequence.  A live stream must not be shared between concurrent
    consumers; derive one stream per run instead.
    """

    __slots__ = ("master_seed", "stream_id", "_gen", "_buf", "_pos")

    _BUF_SIZE = 4096

    def __init__(self, master_seed: int, stream_id: int):
        if master_seed < 0 or stream_id < 0:
            raise DomainError("seeds must be non-negative integers")
        self.master_seed = int(master_seed)
        self.stream_id = int(stream_id) & _STREAM_ID_MASK
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_id,))
        self._gen = np.random.Generator(np.random.PCG64(seq))
        self._buf = None
        self._pos = 0

    def uniform(self) -> float:
        """Next uniform draw in [0, 1)."""
        buf = self._buf
        if buf is None or self._pos >= len(buf):
            # Batched refill; Generator.random(n) consumes the identical
            # next_double sequence as n scalar .random() calls.
            self._buf = buf = self._gen.random(self._BUF_SIZE)
            self._pos = 0
        u = buf[self._pos]
        self._pos += 1
        return float(u)

    def uniform_open(self) -> float:
        """Next uniform draw in (0, 1)."""
        u = self.uniform()
        return u if u > 0.0 else _MIN_UNIFORM

    def uniforms(self, n: int) -> np.ndarray:
        """Next ``n`` uniforms as an array (same sequence as ``uniform``)."""
        if self._buf is not None and self._pos < len(self._buf):
            head = self._buf[self._pos : self._pos + n]
            self._buf = None
            self._pos = 0
            if len(head) == n:
                return head.copy()
            return np.concatenate([head, self._gen.random(n - len(head))])
        self._buf = None
        self._pos = 0
        return self._gen.random(n)

    def integer(self, k: int) -> int:
        """Uniform integer in [0, k) consuming exactly one uniform."""
        i = int(self.uniform() * k)
        return i if i < k else k - 1

    def bit_generator(self) -> np.random.BitGenerator:
        """Raw bit generator for the compiled kernel.

        Only legal on a stream with no buffered-but-unserved draws (in
        practice: a freshly derived stream), since PCG64 cannot rewind.
        """
        if self._buf is not None and self._pos < len(self._buf):
            raise StateError("stream has unserved buffered draws; derive a fresh stream")
        self._buf = None
        self._pos = 0
        return self._gen.bit_generator

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, stream_id={self.stream_id})"


def derive_stream(master_seed: int, run_index: int) -> RngStream:
    """Derive the stream for one run (or sub-purpose) of an experiment.

    The mapping ``(master_seed, run_index) -> stream`` is injective and
    stable across processes and platforms, so any run can be reproduced
    in isolation.
    """
    return RngStream(master_seed, run_index)


def laplace_quantile(b: float, u: float) -> float:
    """Inverse CDF of the zero-mean Laplace law with scale ``b``.

    F^{-1}(u) = -b * sgn(u - 1/2) * ln(1 - 2|u - 1/2|);  strictly
    increasing in ``u`` and antisymmetric about ``u = 1/2``.
    """
    if not b > 0.0 or math.isinf(b):
        raise DomainError(f"Laplace scale must be positive and finite, got {b}")
    if not 0.0 < u < 1.0:
        raise DomainError(f"quantile argument must lie in (0, 1), got {u}")
    d = u - 0.5
    return -b * math.copysign(1.0, d) * math.log(1.0 - 2.0 * abs(d))


def laplace_quantile_array(b: float, u: np.ndarray) -> np.ndarray:
    """Vectorised :func:`laplace_quantile` (used by batched mechanisms)."""
    if not b > 0.0 or math.isinf(b):
        raise DomainError(f"Laplace scale must be positive and finite, got {b}")
    d = np.asarray(u, dtype=np.float64) - 0.5
    return -b * np.sign(d) * np.log1p(-2.0 * np.abs(d))


def laplace_cdf(x: float, b: float) -> float:
    """CDF of the zero-mean Laplace law with scale ``b``."""
    if not b > 0.0:
        raise DomainError(f"Laplace scale must be positive, got {b}")
    if x < 0.0:
        return 0.5 * math.exp(x / b)
    return 1.0 - 0.5 * math.exp(-x / b)


def sample_laplace(stream: RngStream, b: float) -> float:
    """One Lap(b) draw, consuming exactly one uniform from ``stream``."""
    return laplace_quantile(b, stream.uniform_open())
