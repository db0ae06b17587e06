"""Counter-based random bits.

Every bit is a hash of (run seed, stream key, index), so a node's private
string or the shared string can be read in any order, by any number of
simulated nodes, and vectorized over many nodes at once.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_PRIVATE, _SHARED, _SEQUENTIAL = 0x5EED01, 0x5EED02, 0x5EED03


def splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def splitmix64_np(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64) + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def hash_key(*parts: int) -> int:
    h = 0
    for p in parts:
        h = splitmix64(h ^ (int(p) & _MASK))
    return h


def derive_seed(seed: int, *parts: int) -> int:
    """An independent seed for trial ``parts`` of a run seeded with ``seed``."""
    return hash_key(seed, *parts) >> 1


def _bit(word: int) -> int:
    return word >> 63


class NodeStream:
    """The private random string of one node."""

    __slots__ = ("_key",)

    def __init__(self, seed: int, node: int):
        self._key = hash_key(_PRIVATE, seed, node)

    def bit(self, i: int = 0) -> int:
        return _bit(splitmix64(self._key ^ i))

    def bits(self, k: int) -> list[int]:
        return [self.bit(i) for i in range(k)]

    def uniform(self, i: int = 0) -> float:
        return (splitmix64(self._key ^ i) >> 11) * 2.0 ** -53


class PrivateRandomness:
    def __init__(self, seed: int):
        self.seed = seed

    def stream(self, node: int) -> NodeStream:
        return NodeStream(self.seed, node)

    def bit(self, node: int, i: int = 0) -> int:
        return self.stream(node).bit(i)

    def bits_for(self, nodes, i: int = 0) -> np.ndarray:
        """Bit ``i`` of the private string of each node in ``nodes``, vectorized."""
        nodes = np.asarray(nodes, dtype=np.uint64)
        h = splitmix64_np(np.full(len(nodes), np.uint64(0)) ^ np.uint64(_PRIVATE))
        h = splitmix64_np(h ^ np.uint64(self.seed & _MASK))
        h = splitmix64_np(h ^ nodes)
        return (splitmix64_np(h ^ np.uint64(i)) >> np.uint64(63)).astype(np.int8)


class SharedRandomness:
    """One string of bits visible to every node."""

    def __init__(self, seed: int):
        self.seed = seed
        self._key = hash_key(_SHARED, seed)

    def bit(self, i: int) -> int:
        return _bit(splitmix64(self._key ^ i))

    def bits(self, k: int) -> np.ndarray:
        idx = np.arange(k, dtype=np.uint64)
        return (splitmix64_np(np.uint64(self._key) ^ idx) >> np.uint64(63)).astype(np.int8)


class FixedShared:
    """A shared string fixed in advance (turns a shared-randomness algorithm deterministic)."""

    def __init__(self, bits):
        self._bits = [int(b) for b in bits]

    def bit(self, i: int) -> int:
        return self._bits[i] if i < len(self._bits) else 0

    def bits(self, k: int) -> np.ndarray:
        return np.array([self.bit(i) for i in range(k)], dtype=np.int8)


class ReadOnceStream:
    """A single global sequence of random bits consumed in processing order."""

    def __init__(self, seed: int):
        self._key = hash_key(_SEQUENTIAL, seed)
        self.position = 0

    def next_bit(self) -> int:
        b = _bit(splitmix64(self._key ^ self.position))
        self.position += 1
        return b
