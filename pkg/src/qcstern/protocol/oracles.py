"""Test oracles: the honest-verifier simulator and the DSD knowledge extractor."""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import BitVector, rotate, rotate_pair
from ..codec import DecodeError, compress_response, decompress_response
from ..commit import com
from ..params import ParameterSet
from ..seedexp import Tag, derive_seed, expand_permutation, expand_vector, expand_weight_w
from .core import (Challenge1, Challenge2, PublicKey, _aggregate, build_response,
                   commit_iteration, iteration_seeds, verify)

# seeds for the simulator's fake witnesses live far from the iteration seeds
SIM_INDEX_BASE = 0x80000000


def simulate_transcript(pk: PublicKey, params: ParameterSet, ch1: Challenge1, ch2: Challenge2,
                        randomness: bytes) -> tuple[bytes, bytes, bytes]:
    """Accepting (Cmt1, Cmt2, Rsp) for the given challenges, built without a secret.

    The challenges are handed in up front, which replaces the rewinding a
    black-box simulator would do.
    """
    ch1.validate(params)
    ch2.validate(params)
    H = pk.matrix(params)
    k, n = params.k, params.n
    thetas, xis, masters = iteration_seeds(randomness, params)
    iters = [commit_iteration(H, thetas[i], xis[i], i, params) for i in range(params.delta)]

    for i, (it, (s_i, r_i), b) in enumerate(zip(iters, ch1.entries, ch2.bits)):
        seed = derive_seed(randomness, Tag.SEED, SIM_INDEX_BASE + i, params.seed_bytes)
        if b == 0:
            # any preimage of the rotated syndrome: H (x1, x2) = x1 + A x2
            x2 = expand_vector(seed, Tag.VECTOR, i, k)
            x1 = rotate(pk.syndromes[s_i], r_i) ^ H.block.mul(x2)
            fake = x1.concat(x2)
        else:
            fake = expand_weight_w(seed, Tag.SECRET, i, n, params.w)
        it.x_rot = fake
        it.c3 = com(it.perm.apply(it.u ^ fake).to_bytes(), size=params.commit_bytes)

    cmt1 = _aggregate([c for it in iters for c in (it.c1, it.c2)], params)
    cmt2 = _aggregate([it.c3 for it in iters], params)
    responses = [build_response(it, b, params) for it, b in zip(iters, ch2.bits)]
    return cmt1, cmt2, compress_response(responses, ch2.bits, masters, params)


@dataclass(frozen=True)
class Transcript:
    cmt1: bytes
    ch1: Challenge1
    cmt2: bytes
    ch2: Challenge2
    rsp: bytes

    def accepted(self, pk: PublicKey, params: ParameterSet) -> bool:
        return verify(pk, params, self.cmt1, self.ch1, self.cmt2, self.ch2, self.rsp)


class ExtractionFailure(Exception):
    """The transcripts are inconsistent, i.e. a commitment was opened two ways."""


@dataclass(frozen=True)
class DSDSolution:
    offset: BitVector
    z: tuple[BitVector, ...]
    indices: tuple[tuple[int, int], ...]


def extract_dsd(pk: PublicKey, params: ParameterSet, pairs, iteration: int = 0) -> DSDSolution:
    """Extract a differential syndrome decoding solution from forked transcripts.

    ``pairs`` holds ``alpha`` couples ``(t0, t1)`` of accepted transcripts
    sharing one Cmt1.  Within a couple both transcripts share Ch1 and Cmt2
    and answer b = 0 and b = 1 respectively at ``iteration``; the Ch1
    entries at ``iteration`` must be distinct across couples.
    """
    if not pairs:
        raise ExtractionFailure("need at least one transcript pair")
    H = pk.matrix(params)
    n = params.n
    cmt1 = pairs[0][0].cmt1
    indices = []
    perms, masks, shifted, revealed = [], [], [], []
    for t0, t1 in pairs:
        if not (t0.cmt1 == t1.cmt1 == cmt1):
            raise ExtractionFailure("transcripts do not share Cmt1")
        if t0.ch1 != t1.ch1 or t0.cmt2 != t1.cmt2:
            raise ExtractionFailure("a pair does not share Ch1/Cmt2")
        if t0.ch2.bits[iteration] != 0 or t1.ch2.bits[iteration] != 1:
            raise ExtractionFailure("a pair does not cover both branches")
        if not (t0.accepted(pk, params) and t1.accepted(pk, params)):
            raise ExtractionFailure("transcript rejected by the verifier")
        try:
            d0 = decompress_response(t0.rsp, t0.ch2.bits, params)[iteration]
            d1 = decompress_response(t1.rsp, t1.ch2.bits, params)[iteration]
        except DecodeError as exc:
            raise ExtractionFailure(str(exc)) from None
        s_j, r_j = t0.ch1.entries[iteration]
        indices.append((s_j, r_j))
        perms.append(expand_permutation(d0.seed, Tag.PERM, iteration, n))
        masks.append(d1.masked if d1.masked is not None
                     else expand_vector(d1.seed, Tag.VECTOR, iteration, n))
        shifted.append(H.syndrome(d0.vector) ^ rotate(pk.syndromes[s_j], r_j))
        revealed.append(d1.vector)

    if len(set(indices)) != len(indices):
        raise ExtractionFailure("first challenges are not distinct")
    if any(p != perms[0] for p in perms) or any(m != masks[0] for m in masks) \
            or any(c != shifted[0] for c in shifted):
        raise ExtractionFailure("commitment opened to two different values")

    inv = perms[0].inverse()
    offset = H.syndrome(inv.apply(masks[0])) ^ shifted[0]
    z = tuple(inv.apply(e) for e in revealed)
    return DSDSolution(offset, z, tuple(indices))


def verify_dsd_solution(pk: PublicKey, params: ParameterSet, offset: BitVector, z, indices,
                        x_check=None) -> bool:
    """Check ``H rot_r(x) = offset + H z_j`` and ``wt(z_j) = w`` for every j.

    ``H rot_r(x)`` is public as ``rot_r(y)``.  When the secrets ``x_check``
    are supplied the relation is also checked against them directly.
    """
    if len(z) != len(indices) or len(set(indices)) != len(indices):
        return False
    H = pk.matrix(params)
    for z_j, (s_j, r_j) in zip(z, indices):
        if z_j.length != params.n or z_j.weight() != params.w:
            return False
        rhs = offset ^ H.syndrome(z_j)
        if rotate(pk.syndromes[s_j], r_j) != rhs:
            return False
        if x_check is not None and H.syndrome(rotate_pair(x_check[s_j], r_j)) != rhs:
            return False
    return True
