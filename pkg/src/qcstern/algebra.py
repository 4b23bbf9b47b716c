"""Bit-packed F2 arithmetic for index-2 quasi-cyclic codes.

A :class:`BitVector` stores its coordinates in a Python integer, coordinate
``i`` being bit ``i``.  The canonical byte form is little-endian: coordinate
``i`` lives in byte ``i // 8`` at bit position ``i % 8``.

Rotation convention: ``rotate(v, r)[i] == v[(i - r) % k]``, so rotating
``1000`` by one gives ``0100``.  Circulant row ``i`` is the first row rotated
by ``i``.  Both commute with the syndrome map, which is all the protocol
needs.
"""

from __future__ import annotations

from functools import cached_property, reduce
import operator

import numpy as np


class ShapeError(ValueError):
    pass


class BitVector:
    """Immutable vector over F2 of fixed length."""

    __slots__ = ("length", "value")

    def __init__(self, length: int, value: int = 0):
        if length <= 0:
            raise ShapeError("length must be positive")
        if value < 0 or value >> length:
            raise ValueError("value has bits beyond length %d" % length)
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("BitVector is immutable")

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length, 0)

    @classmethod
    def ones(cls, length: int) -> "BitVector":
        return cls(length, (1 << length) - 1)

    @classmethod
    def from_bits(cls, bits) -> "BitVector":
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 1 or bits.size == 0:
            raise ShapeError("expected a non-empty 1-d bit sequence")
        if np.any(bits > 1):
            raise ValueError("bits must be 0 or 1")
        packed = np.packbits(bits, bitorder="little").tobytes()
        return cls(bits.size, int.from_bytes(packed, "little"))

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        """``"1011"`` -> coordinates 1, 0, 1, 1 (index 0 first)."""
        text = text.replace("|", "").replace(" ", "")
        return cls.from_bits([int(c) for c in text])

    @classmethod
    def from_support(cls, length: int, support) -> "BitVector":
        value = 0
        for i in support:
            if not 0 <= i < length:
                raise IndexError(i)
            value |= 1 << i
        return cls(length, value)

    @classmethod
    def from_bytes(cls, data: bytes, length: int) -> "BitVector":
        """Parse the canonical packing; padding bits must be zero."""
        if len(data) != (length + 7) // 8:
            raise ValueError("expected %d bytes, got %d" % ((length + 7) // 8, len(data)))
        return cls(length, int.from_bytes(data, "little"))

    def to_bytes(self) -> bytes:
        return self.value.to_bytes((self.length + 7) // 8, "little")

    def bits(self) -> np.ndarray:
        raw = np.frombuffer(self.to_bytes(), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little", count=self.length)

    def support(self) -> list[int]:
        return np.flatnonzero(self.bits()).tolist()

    def weight(self) -> int:
        return self.value.bit_count()

    def split(self, at: int) -> tuple["BitVector", "BitVector"]:
        if not 0 < at < self.length:
            raise ShapeError("split point out of range")
        lo = self.value & ((1 << at) - 1)
        return BitVector(at, lo), BitVector(self.length - at, self.value >> at)

    def concat(self, other: "BitVector") -> "BitVector":
        return BitVector(self.length + other.length, self.value | (other.value << self.length))

    def __xor__(self, other: "BitVector") -> "BitVector":
        if not isinstance(other, BitVector):
            return NotImplemented
        if other.length != self.length:
            raise ShapeError("length mismatch: %d vs %d" % (self.length, other.length))
        return BitVector(self.length, self.value ^ other.value)

    __add__ = __xor__

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.value >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and self.value == other.value

    def __hash__(self) -> int:
        return hash((self.length, self.value))

    def __str__(self) -> str:
        return format(self.value, "0%db" % self.length)[::-1]

    def __repr__(self) -> str:
        if self.length <= 64:
            return "BitVector(%r)" % str(self)
        return "BitVector(length=%d, weight=%d)" % (self.length, self.weight())


class Permutation:
    """Bijection on ``range(n)``; ``p.apply(v)[i] == v[p.images[i]]``."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = np.asarray(images, dtype=np.int64)
        n = images.size
        if n == 0 or not np.array_equal(np.sort(images), np.arange(n)):
            raise ValueError("not a permutation")
        images.setflags(write=False)
        self.images = images

    @classmethod
    def _trusted(cls, images: np.ndarray) -> "Permutation":
        self = object.__new__(cls)
        images.setflags(write=False)
        self.images = images
        return self

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    @property
    def n(self) -> int:
        return self.images.size

    def apply(self, v: BitVector) -> BitVector:
        if v.length != self.n:
            raise ValueError("permutation on %d points applied to length %d" % (self.n, v.length))
        return BitVector.from_bits(v.bits()[self.images])

    __getitem__ = apply

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.n)
        return Permutation._trusted(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """``self.compose(other).apply(v) == self.apply(other.apply(v))``."""
        return Permutation(other.images[self.images])

    def to_bytes(self) -> bytes:
        return self.images.astype(">u2").tobytes()

    def __eq__(self, other):
        return isinstance(other, Permutation) and np.array_equal(self.images, other.images)

    def __hash__(self):
        return hash(self.images.tobytes())

    def __repr__(self):
        return "Permutation(%s)" % self.images.tolist() if self.n <= 16 else "Permutation(n=%d)" % self.n


def weight(v: BitVector) -> int:
    return v.weight()


def rotate(v: BitVector, r: int) -> BitVector:
    k = v.length
    if not 0 <= r < k:
        raise ValueError("rotation %d out of range [0, %d)" % (r, k))
    if r == 0:
        return v
    mask = (1 << k) - 1
    return BitVector(k, ((v.value << r) | (v.value >> (k - r))) & mask)


def rotate_pair(v: BitVector, r: int) -> BitVector:
    """Rotate both halves of a length-2k vector by ``r``."""
    if v.length % 2:
        raise ShapeError("rotate_pair needs an even length, got %d" % v.length)
    lo, hi = v.split(v.length // 2)
    return rotate(lo, r).concat(rotate(hi, r))


class CirculantBlock:
    """k x k circulant matrix over F2, stored by its first row."""

    __slots__ = ("k", "first_row", "__dict__")

    def __init__(self, first_row: BitVector):
        self.k = first_row.length
        self.first_row = first_row

    @cached_property
    def _columns(self) -> np.ndarray:
        # column j of the matrix is rot(a', j) with a'[i] = a[-i mod k]
        k = self.k
        a = self.first_row.bits()
        col0 = BitVector.from_bits(a[(-np.arange(k)) % k])
        nbytes = (k + 7) // 8
        raw = b"".join(rotate(col0, j).to_bytes() for j in range(k))
        return np.frombuffer(raw, dtype=np.uint8).reshape(k, nbytes)

    def row(self, i: int) -> BitVector:
        return rotate(self.first_row, i)

    def mul(self, v: BitVector) -> BitVector:
        if v.length != self.k:
            raise ShapeError("circulant of size %d applied to length %d" % (self.k, v.length))
        idx = np.flatnonzero(v.bits())
        if idx.size == 0:
            return BitVector.zeros(self.k)
        acc = np.bitwise_xor.reduce(self._columns[idx], axis=0)
        return BitVector(self.k, int.from_bytes(acc.tobytes(), "little"))

    def __eq__(self, other):
        return isinstance(other, CirculantBlock) and self.first_row == other.first_row

    def __hash__(self):
        return hash(self.first_row)


def circulant_mul(A: CirculantBlock, v: BitVector) -> BitVector:
    return A.mul(v)


class QCParityCheck:
    """Systematic parity-check matrix ``H = [I_k | A]`` with ``A`` circulant."""

    __slots__ = ("k", "block")

    def __init__(self, block: CirculantBlock):
        self.k = block.k
        self.block = block

    @property
    def n(self) -> int:
        return 2 * self.k

    def syndrome(self, x: BitVector) -> BitVector:
        if x.length != 2 * self.k:
            raise ShapeError("expected length %d, got %d" % (2 * self.k, x.length))
        x1, x2 = x.split(self.k)
        return x1 ^ self.block.mul(x2)

    def to_dense(self) -> np.ndarray:
        k = self.k
        rows = [np.concatenate([np.eye(k, dtype=np.uint8)[i], self.block.row(i).bits()])
                for i in range(k)]
        return np.array(rows, dtype=np.uint8)

    def __eq__(self, other):
        return isinstance(other, QCParityCheck) and self.block == other.block

    def __hash__(self):
        return hash(self.block)


def syndrome(H: QCParityCheck, x: BitVector) -> BitVector:
    return H.syndrome(x)


def xor_all(vectors, length: int) -> BitVector:
    return reduce(operator.xor, vectors, BitVector.zeros(length))
