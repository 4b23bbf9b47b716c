"""Response compression: constant-weight coding, seed pairing, bit packing.

Packed response layout, written as one little-endian bit stream and padded
with zero bits to a whole byte:

1. seed material, pair by pair, then the unpaired last iteration if delta is
   odd.  A pair whose two iterations reveal the same kind of seed sends the
   pair's master seed; otherwise each iteration sends its own child seed.
2. for each iteration in order: the revealed vector (``n`` bits when b = 0;
   ``n - k`` bits of combinadic rank, most significant bit first, when b = 1),
   then ``v`` in the clear if seed_for_vector is off and b = 1, then the
   missing commitment if commitments are aggregated.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import lru_cache
import math

from .algebra import BitVector
from .params import ParameterSet
from .seedexp import derive_pair


class DecodeError(ValueError):
    """Malformed packed data."""


@dataclass(frozen=True)
class IterationResponse:
    """What the prover reveals for one iteration.

    b = 0: ``seed`` is theta, ``vector`` is u + x, ``commitment`` is c2.
    b = 1: ``seed`` is xi (or ``masked`` holds v itself), ``vector`` is
    pi[x], ``commitment`` is c1.  ``commitment`` is None when the verifier
    already holds every commitment.
    """

    branch: int
    seed: bytes | None
    vector: BitVector
    commitment: bytes | None
    masked: BitVector | None = None


# ---- constant-weight words ----

@lru_cache(maxsize=8)
def _pascal(n: int, w: int) -> list[list[int]]:
    # cols[t][m] = C(m, t) for m <= n, t <= w
    cols = [[1] * (n + 1)]
    for t in range(1, w + 1):
        prev = cols[-1]
        col = [0] * (n + 1)
        for m in range(1, n + 1):
            col[m] = col[m - 1] + prev[m - 1]
        cols.append(col)
    return cols


def cw_rank(support, n: int) -> int:
    """Lexicographic rank of a sorted w-subset of ``range(n)``."""
    w = len(support)
    table = _pascal(n, w)
    # complement trick: rank = C(n,w) - 1 - sum C(n-1-c_i, w-i)
    total = 0
    for i, c in enumerate(support):
        total += table[w - i][n - 1 - c]
    return table[w][n] - 1 - total


def cw_unrank(rank: int, n: int, w: int) -> list[int]:
    table = _pascal(n, w)
    if not 0 <= rank < table[w][n]:
        raise DecodeError("rank %d outside [0, C(%d, %d))" % (rank, n, w))
    rest = table[w][n] - 1 - rank
    support = []
    hi = n
    for t in range(w, 0, -1):
        # largest m < hi with C(m, t) <= rest
        m = bisect.bisect_right(table[t], rest, 0, hi) - 1
        rest -= table[t][m]
        support.append(n - 1 - m)
        hi = m
    return support


def _reverse_bits(value: int, width: int) -> int:
    return int(format(value, "0%db" % width)[::-1], 2) if width else 0


def cw_encode(v: BitVector, w: int, width: int) -> BitVector:
    """Rank of ``v``'s support as a ``width``-bit field, most significant bit first."""
    if v.weight() != w:
        raise ValueError("vector has weight %d, expected %d" % (v.weight(), w))
    if math.comb(v.length, w) > 1 << width:
        raise ValueError("C(%d, %d) does not fit in %d bits" % (v.length, w, width))
    rank = cw_rank(v.support(), v.length)
    return BitVector(width, _reverse_bits(rank, width))


def cw_decode(code: BitVector, n: int, w: int) -> BitVector:
    rank = _reverse_bits(code.value, code.length)
    return BitVector.from_support(n, cw_unrank(rank, n, w))


# ---- bit streams ----

class BitWriter:
    def __init__(self):
        self._parts: list[tuple[int, int]] = []
        self.nbits = 0

    def write(self, value: int, nbits: int):
        self._parts.append((value, nbits))
        self.nbits += nbits

    def write_vector(self, v: BitVector):
        self.write(v.value, v.length)

    def write_bytes(self, data: bytes):
        self.write(int.from_bytes(data, "little"), 8 * len(data))

    def getvalue(self) -> bytes:
        acc, pos = 0, 0
        for value, nbits in self._parts:
            acc |= value << pos
            pos += nbits
        return acc.to_bytes((pos + 7) // 8, "little")


class BitReader:
    def __init__(self, data: bytes):
        self._value = int.from_bytes(data, "little")
        self._nbits = 8 * len(data)
        self._pos = 0

    def read(self, nbits: int) -> int:
        if self._pos + nbits > self._nbits:
            raise DecodeError("truncated response")
        out = (self._value >> self._pos) & ((1 << nbits) - 1)
        self._pos += nbits
        return out

    def read_vector(self, nbits: int) -> BitVector:
        return BitVector(nbits, self.read(nbits))

    def read_bytes(self, nbytes: int) -> bytes:
        return self.read(8 * nbytes).to_bytes(nbytes, "little")

    def finish(self):
        """Only zero padding (less than one byte) may remain."""
        left = self._nbits - self._pos
        if left >= 8 or self._value >> self._pos:
            raise DecodeError("trailing data after response")


# ---- seed pairing ----

@dataclass(frozen=True)
class SeedLayout:
    pairs: tuple[tuple[int, int], ...]
    single: int | None


def plan_seed_pairs(delta: int) -> SeedLayout:
    if delta < 1:
        raise ValueError("delta must be >= 1")
    pairs = tuple((2 * p, 2 * p + 1) for p in range(delta // 2))
    return SeedLayout(pairs, delta - 1 if delta % 2 else None)


def _seed_kind(params: ParameterSet, b: int) -> str | None:
    if b == 0:
        return "theta"
    return "xi" if params.seed_for_vector else None


def _pair_merged(params: ParameterSet, b1: int, b2: int) -> bool:
    kind = _seed_kind(params, b1)
    return params.seed_pairing and kind is not None and kind == _seed_kind(params, b2)


def seeds_emitted(params: ParameterSet, ch2) -> int:
    """Number of seeds the packed response carries for challenge bits ``ch2``."""
    layout = plan_seed_pairs(params.delta)
    count = 0
    for i, j in layout.pairs:
        if _pair_merged(params, ch2[i], ch2[j]):
            count += 1
        else:
            count += sum(_seed_kind(params, ch2[t]) is not None for t in (i, j))
    if layout.single is not None:
        count += _seed_kind(params, ch2[layout.single]) is not None
    return count


def _iteration_bits(params: ParameterSet, b: int) -> int:
    n = params.n
    bits = n if b == 0 or not params.cw_compression else params.cw_bits
    if b == 1 and not params.seed_for_vector:
        bits += n
    if params.commitment_aggregation:
        bits += 8 * params.commit_bytes
    return bits


def response_bits(params: ParameterSet, ch2) -> int:
    """Exact bit length of the packed response before byte padding."""
    seeds = 8 * params.seed_bytes * seeds_emitted(params, ch2)
    return seeds + sum(_iteration_bits(params, b) for b in ch2)


def response_bytes(params: ParameterSet, ch2) -> int:
    return (response_bits(params, ch2) + 7) // 8


def expected_response_bits(params: ParameterSet) -> float:
    """Mean of :func:`response_bits` over uniform challenge bits."""
    per_iter = params.delta * (_iteration_bits(params, 0) + _iteration_bits(params, 1)) / 2
    layout = plan_seed_pairs(params.delta)
    lam = 8 * params.seed_bytes
    pair_seeds = 0.0
    for b1 in (0, 1):
        for b2 in (0, 1):
            if _pair_merged(params, b1, b2):
                pair_seeds += 1
            else:
                pair_seeds += (_seed_kind(params, b1) is not None) + (_seed_kind(params, b2) is not None)
    seeds = len(layout.pairs) * pair_seeds / 4
    if layout.single is not None:
        seeds += ((_seed_kind(params, 0) is not None) + (_seed_kind(params, 1) is not None)) / 2
    return per_iter + lam * seeds


# ---- compress / decompress ----

def compress_response(responses, ch2, masters, params: ParameterSet) -> bytes:
    """Pack ``responses`` (one :class:`IterationResponse` per iteration).

    ``masters[p]`` is the ``(theta_master, xi_master)`` pair from which
    iterations ``2p`` and ``2p + 1`` derived their seeds.
    """
    delta = params.delta
    if len(responses) != delta or len(ch2) != delta:
        raise ValueError("expected %d responses and challenge bits" % delta)
    for i, (d, b) in enumerate(zip(responses, ch2)):
        _check_shape(d, b, params, i)

    layout = plan_seed_pairs(delta)
    out = BitWriter()
    for p, (i, j) in enumerate(layout.pairs):
        if _pair_merged(params, ch2[i], ch2[j]):
            master = masters[p][0 if ch2[i] == 0 else 1]
            if derive_pair(master, p) != (responses[i].seed, responses[j].seed):
                raise ValueError("pair %d seeds were not derived from the given master" % p)
            out.write_bytes(master)
        else:
            for t in (i, j):
                if responses[t].seed is not None:
                    out.write_bytes(responses[t].seed)
    if layout.single is not None and responses[layout.single].seed is not None:
        out.write_bytes(responses[layout.single].seed)

    for d in responses:
        if d.branch == 1 and params.cw_compression:
            out.write_vector(cw_encode(d.vector, params.w, params.cw_bits))
        else:
            out.write_vector(d.vector)
        if d.masked is not None:
            out.write_vector(d.masked)
        if d.commitment is not None:
            out.write_bytes(d.commitment)
    return out.getvalue()


def _check_shape(d: IterationResponse, b: int, params: ParameterSet, i: int):
    if d.branch != b:
        raise ValueError("iteration %d answers branch %d, challenge was %d" % (i, d.branch, b))
    if d.vector.length != params.n:
        raise ValueError("iteration %d: vector length %d" % (i, d.vector.length))
    wants_seed = _seed_kind(params, b) is not None
    if (d.seed is not None) != wants_seed or (d.seed is not None and len(d.seed) != params.seed_bytes):
        raise ValueError("iteration %d: seed does not match the branch" % i)
    wants_masked = b == 1 and not params.seed_for_vector
    if (d.masked is not None) != wants_masked:
        raise ValueError("iteration %d: clear mask vector present/absent wrongly" % i)
    if (d.commitment is not None) != params.commitment_aggregation:
        raise ValueError("iteration %d: missing commitment present/absent wrongly" % i)
    if b == 1 and params.cw_compression and d.vector.weight() != params.w:
        raise ValueError("iteration %d: weight %d cannot be cw-encoded" % (i, d.vector.weight()))


def decompress_response(data: bytes, ch2, params: ParameterSet) -> list[IterationResponse]:
    """Inverse of :func:`compress_response`.  Raises :class:`DecodeError`."""
    delta = params.delta
    if len(ch2) != delta:
        raise DecodeError("challenge has %d bits, expected %d" % (len(ch2), delta))
    expected = response_bytes(params, ch2)
    if len(data) != expected:
        raise DecodeError("response is %d bytes, expected %d" % (len(data), expected))
    reader = BitReader(data)
    nseed = params.seed_bytes
    seeds: list[bytes | None] = [None] * delta
    layout = plan_seed_pairs(delta)
    for p, (i, j) in enumerate(layout.pairs):
        if _pair_merged(params, ch2[i], ch2[j]):
            seeds[i], seeds[j] = derive_pair(reader.read_bytes(nseed), p)
        else:
            for t in (i, j):
                if _seed_kind(params, ch2[t]) is not None:
                    seeds[t] = reader.read_bytes(nseed)
    if layout.single is not None and _seed_kind(params, ch2[layout.single]) is not None:
        seeds[layout.single] = reader.read_bytes(nseed)

    out = []
    n = params.n
    for i, b in enumerate(ch2):
        if b == 1 and params.cw_compression:
            vector = cw_decode(reader.read_vector(params.cw_bits), n, params.w)
        else:
            vector = reader.read_vector(n)
        masked = reader.read_vector(n) if b == 1 and not params.seed_for_vector else None
        c = reader.read_bytes(params.commit_bytes) if params.commitment_aggregation else None
        out.append(IterationResponse(b, seeds[i], vector, c, masked))
    reader.finish()
    return out
