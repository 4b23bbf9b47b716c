"""Deterministic expansion of seeds into protocol objects.

Every expansion reads from ``SHAKE256(tag || index || data)`` where ``tag`` is
one byte and ``index`` is four bytes big-endian.  Integers in a range are
drawn by masked rejection sampling (never by modular reduction), so all
samplers are exactly uniform when the seed is.
"""

from __future__ import annotations

import enum
import hashlib
from functools import lru_cache

import numpy as np

from .algebra import BitVector, CirculantBlock, Permutation, QCParityCheck

SEED_BYTES = 16


class Tag(enum.IntEnum):
    SECRET = 0x01
    MATRIX = 0x02
    PERM = 0x03
    VECTOR = 0x04
    PAIR_LEFT = 0x05
    PAIR_RIGHT = 0x06
    COMMIT = 0x07
    CHAL1 = 0x08
    CHAL2 = 0x09
    MSG = 0x0A
    SEED = 0x0B


class XofStream:
    """Byte stream over one SHAKE256 instance."""

    def __init__(self, tag: int, index: int, data: bytes):
        if not 0 <= index < 1 << 32:
            raise ValueError("index must fit in 4 bytes")
        self._xof = hashlib.shake_256(bytes([tag]) + index.to_bytes(4, "big") + bytes(data))
        self._buf = b""
        self._pos = 0

    def read(self, n: int) -> bytes:
        end = self._pos + n
        if end > len(self._buf):
            # SHAKE output is prefix-stable, so regrowing is consistent
            self._buf = self._xof.digest(max(end, 2 * len(self._buf), 168))
        out = self._buf[self._pos:end]
        self._pos = end
        return out

    def words(self, count: int, width: int) -> np.ndarray:
        """``count`` big-endian unsigned integers of ``width`` bytes each."""
        data = self.read(count * width)
        if width in (1, 2, 4):
            return np.frombuffer(data, dtype=">u%d" % width).astype(np.int64)
        raw = np.frombuffer(data, dtype=np.uint8).reshape(count, width)
        out = np.zeros(count, dtype=np.int64)
        for b in range(width):
            out = (out << 8) | raw[:, b]
        return out


def xof(tag: int, index: int, data: bytes) -> XofStream:
    return XofStream(tag, index, data)


def _word_width(max_bound: int) -> int:
    return max(1, ((max_bound - 1).bit_length() + 7) // 8)


def _masks_for(bounds: np.ndarray) -> np.ndarray:
    # smallest all-ones mask covering bound - 1
    top = np.maximum(bounds - 1, 0)
    masks = np.zeros_like(top)
    while np.any(masks < top):
        masks = np.where(masks < top, (masks << 1) | 1, masks)
    return masks


def uniform_below(stream: XofStream, bounds) -> np.ndarray:
    """Independent uniform draws ``out[i]`` in ``[0, bounds[i])``.

    Rejection proceeds in rounds: every pending slot takes the next word of
    the stream, in slot order, until all slots are filled.
    """
    bounds = np.asarray(bounds, dtype=np.int64)
    if bounds.size == 0:
        return bounds.copy()
    if np.any(bounds < 1):
        raise ValueError("bounds must be positive")
    return _uniform_below(stream, bounds, _masks_for(bounds), _word_width(int(bounds.max())))


def _uniform_below(stream, bounds, masks, width):
    out = np.zeros(bounds.size, dtype=np.int64)
    pending = np.arange(bounds.size)
    while pending.size:
        cand = stream.words(pending.size, width) & masks[pending]
        ok = cand < bounds[pending]
        out[pending[ok]] = cand[ok]
        pending = pending[~ok]
    return out


def derive_seed(data: bytes, tag: int, index: int, size: int = SEED_BYTES) -> bytes:
    return xof(tag, index, data).read(size)


def expand_vector(seed: bytes, tag: int, index: int, n: int) -> BitVector:
    if n <= 0:
        raise ValueError("n must be positive")
    raw = xof(tag, index, seed).read((n + 7) // 8)
    return BitVector(n, int.from_bytes(raw, "little") & ((1 << n) - 1))


def expand_weight_w(seed: bytes, tag: int, index: int, n: int, w: int) -> BitVector:
    if not 0 <= w <= n:
        raise ValueError("weight %d out of range [0, %d]" % (w, n))
    if w == n:
        return BitVector.ones(n)
    stream = xof(tag, index, seed)
    width = _word_width(n)
    mask = (1 << (n - 1).bit_length()) - 1
    chosen: set[int] = set()
    value = 0
    while len(chosen) < w:
        for pos in (stream.words(w - len(chosen), width) & mask).tolist():
            if pos < n and pos not in chosen:
                chosen.add(pos)
                value |= 1 << pos
                if len(chosen) == w:
                    break
    return BitVector(n, value)


def expand_permutation(seed: bytes, tag: int, index: int, n: int) -> Permutation:
    """Fisher-Yates shuffle driven by the seed."""
    if n <= 0:
        raise ValueError("n must be positive")
    if n > 1 << 16:
        raise ValueError("permutations are serialized with 16-bit images")
    bounds, masks, width = _shuffle_plan(n)
    picks = _uniform_below(xof(tag, index, seed), bounds, masks, width).tolist()
    images = list(range(n))
    for i, j in zip(range(n - 1, 0, -1), picks):
        images[i], images[j] = images[j], images[i]
    return Permutation._trusted(np.array(images, dtype=np.int64))


@lru_cache(maxsize=16)
def _shuffle_plan(n: int):
    # step i of the shuffle picks j in [0, i], for i = n-1 down to 1
    bounds = np.arange(n, 1, -1, dtype=np.int64)
    return bounds, _masks_for(bounds), _word_width(n)


@lru_cache(maxsize=64)
def expand_circulant(seed: bytes, tag: int, k: int) -> QCParityCheck:
    if k <= 0:
        raise ValueError("k must be positive")
    return QCParityCheck(CirculantBlock(expand_vector(seed, tag, 0, k)))


def derive_pair(master: bytes, pair_index: int) -> tuple[bytes, bytes]:
    size = len(master)
    return (xof(Tag.PAIR_LEFT, pair_index, master).read(size),
            xof(Tag.PAIR_RIGHT, pair_index, master).read(size))
