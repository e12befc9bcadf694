"""Deterministic randomness with a fully specified bit stream.

Every sampled object in this package (Gaussian matrices, Haar unitaries,
random grid functions, subset samples) is drawn through :class:`SplitMix64`
so that a seed written in a scenario file pins the stream down exactly,
independent of numpy's generator internals.  The generator is the classic
splitmix64 state transition:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state
    z <- ((z XOR (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z <- ((z XOR (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output z XOR (z >> 31)

Derived quantities are defined on top of the raw 64-bit stream as follows.

uniform:        (next_uint64 >> 11) * 2^-53, a double in [0, 1).
integer(n):     next_uint64 mod n  (modulo reduction; the bias is irrelevant
                at the sample counts used here and keeps the rule trivial).
normal pair:    Box-Muller from two uniforms u1, u2 drawn in that order,
                r = sqrt(-2 ln(1 - u1)), theta = 2 pi u2,
                pair = (r cos theta, r sin theta).
standard_normal: the first component of a fresh normal pair (the second is
                discarded; no caching, so the stream position is always
                two uniforms per call).
complex_normal: (x + i y) / sqrt(2) with (x, y) one normal pair.
complex_matrix: entries drawn row-major, one complex_normal each.
haar_unitary(n): QR of an n x n complex_normal matrix, with each column of Q
                multiplied by r_jj / |r_jj| so the R diagonal is positive and
                the distribution is exactly Haar.

Independent substreams come from `derive_seed(root, label)` which mixes the
root seed with the FNV-1a hash of a text label through one splitmix64 step.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3

_TWO_PI = 2.0 * math.pi


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def fnv1a64(text: str) -> int:
    """FNV-1a hash of the UTF-8 bytes of `text`, as a 64-bit integer."""
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & MASK64
    return h


def derive_seed(root: int, label: str) -> int:
    """A reproducible child seed for the named substream of `root`."""
    return _mix((int(root) ^ fnv1a64(label)) & MASK64)


class SplitMix64:
    """splitmix64 stream with the derived draws documented in the module."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = int(seed) & MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & MASK64
        return _mix(self._state)

    def uniform(self) -> float:
        return (self.next_uint64() >> 11) * 2.0**-53

    def integer(self, bound: int) -> int:
        """An integer in [0, bound) by modulo reduction."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_uint64() % bound

    def normal_pair(self) -> tuple[float, float]:
        u1 = self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(1.0 - u1))
        theta = _TWO_PI * u2
        return r * math.cos(theta), r * math.sin(theta)

    def standard_normal(self) -> float:
        return self.normal_pair()[0]

    def complex_normal(self) -> complex:
        x, y = self.normal_pair()
        return complex(x, y) / math.sqrt(2.0)

    def complex_matrix(self, rows: int, cols: int) -> np.ndarray:
        out = np.empty((rows, cols), dtype=np.complex128)
        for i in range(rows):
            for j in range(cols):
                out[i, j] = self.complex_normal()
        return out

    def haar_unitary(self, n: int) -> np.ndarray:
        """Haar-distributed n x n unitary via phase-normalized QR."""
        g = self.complex_matrix(n, n)
        q, r = np.linalg.qr(g)
        d = np.diagonal(r).copy()
        # zero diagonal entries have probability zero; normalize defensively
        d[d == 0] = 1.0
        return q * (d / np.abs(d))

    def sample_indices(self, population: int, count: int) -> list[int]:
        """`count` distinct indices from range(population), order of draw."""
        if count > population:
            raise ValueError("cannot sample more indices than the population")
        chosen: list[int] = []
        seen = set()
        while len(chosen) < count:
            k = self.integer(population)
            if k not in seen:
                seen.add(k)
                chosen.append(k)
        return chosen

    def spawn(self, label: str) -> "SplitMix64":
        """Independent substream named by `label`, seeded off this stream's
        current state transition (does not consume from this stream)."""
        return SplitMix64(derive_seed(self._state, label))
