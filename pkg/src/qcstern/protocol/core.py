"""Five-round quasi-cyclic Stern proof of knowledge.

Round structure::

    P -> V  Cmt1 = Com(c_{1,1} || c_{1,2} || ... || c_{delta,1} || c_{delta,2})
    V -> P  Ch1  = ((s_i, r_i))         s_i in [0, s), r_i in [0, k)
    P -> V  Cmt2 = Com(c_{1,3} || ... || c_{delta,3})
    V -> P  Ch2  = (b_i)                b_i in {0, 1}
    P -> V  Rsp  = packed (d_1, ..., d_delta)

with, per iteration, ``pi`` from seed theta, ``v`` from seed xi,
``u = pi^-1[v]`` and

    c1 = Com(pi || H u),   c2 = Com(pi[u]) = Com(v),   c3 = Com(pi[u + x_r]).

Switching off an optimization flag changes only what is sent, never what
is computed, so accept/reject decisions are identical across flag choices.
"""

from __future__ import annotations

from dataclasses import dataclass
import hashlib

from ..algebra import BitVector, Permutation, QCParityCheck, rotate, rotate_pair
from ..codec import DecodeError, IterationResponse, compress_response, decompress_response
from ..commit import com
from ..params import ParameterSet
from ..seedexp import (Tag, derive_pair, derive_seed, expand_circulant, expand_permutation,
                       expand_vector, expand_weight_w)

# index used when deriving the two key seeds from a root seed
KEYGEN_INDEX = 0xFFFFFFFF


class ProtocolError(RuntimeError):
    """Prover state machine misuse."""


@dataclass(frozen=True)
class SecretKey:
    phi1: bytes

    def to_bytes(self) -> bytes:
        return self.phi1

    @classmethod
    def from_bytes(cls, data: bytes, params: ParameterSet) -> "SecretKey":
        if len(data) != params.seed_bytes:
            raise ValueError("secret key must be %d bytes" % params.seed_bytes)
        return cls(bytes(data))


@dataclass(frozen=True)
class PublicKey:
    phi2: bytes
    syndromes: tuple[BitVector, ...]

    def to_bytes(self) -> bytes:
        return self.phi2 + b"".join(y.to_bytes() for y in self.syndromes)

    @classmethod
    def from_bytes(cls, data: bytes, params: ParameterSet) -> "PublicKey":
        step = (params.k + 7) // 8
        if len(data) != params.seed_bytes + params.s * step:
            raise ValueError("public key must be %d bytes" % (params.seed_bytes + params.s * step))
        phi2 = bytes(data[:params.seed_bytes])
        body = data[params.seed_bytes:]
        ys = tuple(BitVector.from_bytes(body[i * step:(i + 1) * step], params.k)
                   for i in range(params.s))
        return cls(phi2, ys)

    def matrix(self, params: ParameterSet) -> QCParityCheck:
        return expand_circulant(self.phi2, Tag.MATRIX, params.k)

    def digest(self) -> bytes:
        return hashlib.shake_256(self.to_bytes()).digest(32)


def expand_secrets(sk: SecretKey, params: ParameterSet) -> list[BitVector]:
    return [expand_weight_w(sk.phi1, Tag.SECRET, i, params.n, params.w) for i in range(params.s)]


def keygen(params: ParameterSet, root: bytes) -> tuple[SecretKey, PublicKey]:
    phi1 = derive_seed(root, Tag.SECRET, KEYGEN_INDEX, params.seed_bytes)
    phi2 = derive_seed(root, Tag.MATRIX, KEYGEN_INDEX, params.seed_bytes)
    sk = SecretKey(phi1)
    H = expand_circulant(phi2, Tag.MATRIX, params.k)
    return sk, PublicKey(phi2, tuple(H.syndrome(x) for x in expand_secrets(sk, params)))


# ---- messages ----

@dataclass(frozen=True)
class Challenge1:
    entries: tuple[tuple[int, int], ...]

    def validate(self, params: ParameterSet):
        if len(self.entries) != params.delta:
            raise ValueError("Ch1 has %d entries, expected %d" % (len(self.entries), params.delta))
        for s_i, r_i in self.entries:
            if not (0 <= s_i < params.s and 0 <= r_i < params.k):
                raise ValueError("Ch1 entry (%d, %d) out of range" % (s_i, r_i))

    def to_bytes(self) -> bytes:
        return b"".join(s.to_bytes(2, "big") + r.to_bytes(2, "big") for s, r in self.entries)

    @classmethod
    def from_bytes(cls, data: bytes, params: ParameterSet) -> "Challenge1":
        if len(data) != 4 * params.delta:
            raise DecodeError("Ch1 must be %d bytes" % (4 * params.delta))
        entries = tuple((int.from_bytes(data[4 * i:4 * i + 2], "big"),
                         int.from_bytes(data[4 * i + 2:4 * i + 4], "big"))
                        for i in range(params.delta))
        ch = cls(entries)
        try:
            ch.validate(params)
        except ValueError as exc:
            raise DecodeError(str(exc)) from None
        return ch


@dataclass(frozen=True)
class Challenge2:
    bits: tuple[int, ...]

    def validate(self, params: ParameterSet):
        if len(self.bits) != params.delta or any(b not in (0, 1) for b in self.bits):
            raise ValueError("Ch2 must be %d bits" % params.delta)

    def to_bytes(self) -> bytes:
        return BitVector.from_bits(self.bits).to_bytes()

    @classmethod
    def from_bytes(cls, data: bytes, params: ParameterSet) -> "Challenge2":
        try:
            v = BitVector.from_bytes(data, params.delta)
        except ValueError as exc:
            raise DecodeError("bad Ch2: %s" % exc) from None
        return cls(tuple(int(b) for b in v.bits()))


def cmt1_bytes(params: ParameterSet) -> int:
    c = params.commit_bytes
    return c if params.commitment_aggregation else 2 * params.delta * c


def cmt2_bytes(params: ParameterSet) -> int:
    c = params.commit_bytes
    return c if params.commitment_aggregation else params.delta * c


# ---- prover ----

def iteration_seeds(randomness: bytes, params: ParameterSet):
    """Per-iteration (theta_i, xi_i) plus the per-pair master seeds.

    Seeds are always generated pairwise; seed_pairing only decides whether
    the response may send a master in place of two children.
    """
    size = params.seed_bytes
    thetas: list[bytes] = []
    xis: list[bytes] = []
    masters = []
    for p in range(params.delta // 2):
        theta_m = derive_seed(randomness, Tag.SEED, 2 * p, size)
        xi_m = derive_seed(randomness, Tag.SEED, 2 * p + 1, size)
        masters.append((theta_m, xi_m))
        thetas.extend(derive_pair(theta_m, p))
        xis.extend(derive_pair(xi_m, p))
    if params.delta % 2:
        last = params.delta // 2
        thetas.append(derive_seed(randomness, Tag.SEED, 2 * last, size))
        xis.append(derive_seed(randomness, Tag.SEED, 2 * last + 1, size))
    return thetas, xis, masters


@dataclass
class _Iteration:
    theta: bytes
    xi: bytes
    perm: Permutation
    u: BitVector
    v: BitVector
    c1: bytes
    c2: bytes
    x_rot: BitVector | None = None
    c3: bytes | None = None


class ProverState:
    """Single-use prover session; each step may run exactly once, in order."""

    def __init__(self, params: ParameterSet, secrets, iterations, masters):
        self.params = params
        self._secrets = secrets
        self._iters = iterations
        self._masters = masters
        self._stage = 1

    def _advance(self, expected: int):
        if self._stage != expected:
            raise ProtocolError("prover state used out of order or after completion")
        self._stage += 1

    def _erase(self):
        self._secrets = self._iters = self._masters = None
        self._stage = -1

    @property
    def consumed(self) -> bool:
        return self._stage == -1


def _aggregate(commitments, params: ParameterSet) -> bytes:
    joined = b"".join(commitments)
    return com(joined, size=params.commit_bytes) if params.commitment_aggregation else joined


def commit_iteration(H: QCParityCheck, theta: bytes, xi: bytes, index: int,
                     params: ParameterSet) -> _Iteration:
    n, size = params.n, params.commit_bytes
    perm = expand_permutation(theta, Tag.PERM, index, n)
    v = expand_vector(xi, Tag.VECTOR, index, n)
    u = perm.inverse().apply(v)
    c1 = com(perm.to_bytes(), H.syndrome(u).to_bytes(), size=size)
    c2 = com(v.to_bytes(), size=size)
    return _Iteration(theta, xi, perm, u, v, c1, c2)


def prover_commit1(sk: SecretKey, pk: PublicKey, params: ParameterSet,
                   randomness: bytes) -> tuple[ProverState, bytes]:
    H = pk.matrix(params)
    thetas, xis, masters = iteration_seeds(randomness, params)
    iters = [commit_iteration(H, thetas[i], xis[i], i, params) for i in range(params.delta)]
    state = ProverState(params, expand_secrets(sk, params), iters, masters)
    flat = [c for it in iters for c in (it.c1, it.c2)]
    return state, _aggregate(flat, params)


def prover_commit2(state: ProverState, ch1: Challenge1) -> bytes:
    params = state.params
    ch1.validate(params)
    state._advance(1)
    for it, (s_i, r_i) in zip(state._iters, ch1.entries):
        it.x_rot = rotate_pair(state._secrets[s_i], r_i)
        it.c3 = com(it.perm.apply(it.u ^ it.x_rot).to_bytes(), size=params.commit_bytes)
    return _aggregate([it.c3 for it in state._iters], params)


def build_response(it: _Iteration, b: int, params: ParameterSet) -> IterationResponse:
    agg = params.commitment_aggregation
    if b == 0:
        return IterationResponse(0, it.theta, it.u ^ it.x_rot, it.c2 if agg else None)
    if params.seed_for_vector:
        return IterationResponse(1, it.xi, it.perm.apply(it.x_rot), it.c1 if agg else None)
    return IterationResponse(1, None, it.perm.apply(it.x_rot), it.c1 if agg else None, masked=it.v)


def prover_responses(state: ProverState, ch2: Challenge2) -> list[IterationResponse]:
    """Unpacked responses; consumes the state like :func:`prover_respond`."""
    params = state.params
    ch2.validate(params)
    state._advance(2)
    out = [build_response(it, b, params) for it, b in zip(state._iters, ch2.bits)]
    return out


def prover_respond(state: ProverState, ch2: Challenge2) -> bytes:
    masters = state._masters
    responses = prover_responses(state, ch2)
    packed = compress_response(responses, ch2.bits, masters, state.params)
    state._erase()
    return packed


# ---- verifier ----

def _split(blob: bytes, size: int) -> list[bytes]:
    return [blob[i:i + size] for i in range(0, len(blob), size)]


def recompute_commitments(pk: PublicKey, params: ParameterSet, ch1: Challenge1,
                          ch2: Challenge2, responses) -> list[tuple[bytes | None, bytes | None, bytes]] | None:
    """Rebuild (c1, c2, c3) per iteration; the one not recomputable is None.

    Returns None when a b = 1 vector has the wrong weight.
    """
    H = pk.matrix(params)
    size, n = params.commit_bytes, params.n
    out = []
    for i, (d, (s_i, r_i), b) in enumerate(zip(responses, ch1.entries, ch2.bits)):
        if b == 0:
            perm = expand_permutation(d.seed, Tag.PERM, i, n)
            shifted = H.syndrome(d.vector) ^ rotate(pk.syndromes[s_i], r_i)
            c1 = com(perm.to_bytes(), shifted.to_bytes(), size=size)
            c3 = com(perm.apply(d.vector).to_bytes(), size=size)
            out.append((c1, None, c3))
        else:
            if d.vector.weight() != params.w:
                return None
            v = d.masked if d.masked is not None else expand_vector(d.seed, Tag.VECTOR, i, n)
            out.append((None, com(v.to_bytes(), size=size), com((v ^ d.vector).to_bytes(), size=size)))
    return out


def verify(pk: PublicKey, params: ParameterSet, cmt1: bytes, ch1: Challenge1, cmt2: bytes,
           ch2: Challenge2, rsp: bytes) -> bool:
    """Accept or reject a transcript.  Malformed input is a rejection."""
    try:
        ch1.validate(params)
        ch2.validate(params)
        if len(cmt1) != cmt1_bytes(params) or len(cmt2) != cmt2_bytes(params):
            return False
        if len(pk.syndromes) != params.s:
            return False
        responses = decompress_response(rsp, ch2.bits, params)
    except (ValueError, TypeError):
        return False

    rebuilt = recompute_commitments(pk, params, ch1, ch2, responses)
    if rebuilt is None:
        return False

    size = params.commit_bytes
    if params.commitment_aggregation:
        flat = []
        for d, (c1, c2, _) in zip(responses, rebuilt):
            flat.append(c1 if c1 is not None else d.commitment)
            flat.append(c2 if c2 is not None else d.commitment)
        return (com(b"".join(flat), size=size) == cmt1
                and com(b"".join(c3 for _, _, c3 in rebuilt), size=size) == cmt2)

    sent1 = _split(cmt1, size)
    sent3 = _split(cmt2, size)
    for i, (c1, c2, c3) in enumerate(rebuilt):
        if c1 is not None and c1 != sent1[2 * i]:
            return False
        if c2 is not None and c2 != sent1[2 * i + 1]:
            return False
        if c3 != sent3[i]:
            return False
    return True


# ---- honest verifier ----

class Verifier:
    """Interactive verifier drawing its challenges from ``rng``.

    ``rng`` needs a ``randrange`` method; it defaults to the OS generator.
    """

    def __init__(self, pk: PublicKey, params: ParameterSet, rng=None):
        import secrets
        self.pk = pk
        self.params = params
        self.rng = rng if rng is not None else secrets.SystemRandom()
        self.cmt1 = self.ch1 = self.cmt2 = self.ch2 = None

    def challenge1(self, cmt1: bytes) -> Challenge1:
        p = self.params
        self.cmt1 = cmt1
        self.ch1 = Challenge1(tuple((self.rng.randrange(p.s), self.rng.randrange(p.k))
                                    for _ in range(p.delta)))
        return self.ch1

    def challenge2(self, cmt2: bytes) -> Challenge2:
        self.cmt2 = cmt2
        self.ch2 = Challenge2(tuple(self.rng.randrange(2) for _ in range(self.params.delta)))
        return self.ch2

    def decide(self, rsp: bytes) -> bool:
        if self.ch2 is None:
            raise ProtocolError("response received before both challenges")
        return verify(self.pk, self.params, self.cmt1, self.ch1, self.cmt2, self.ch2, rsp)


def run_interactive(sk: SecretKey, pk: PublicKey, params: ParameterSet, randomness: bytes,
                    rng=None) -> bool:
    """One in-process honest run of all five rounds."""
    verifier = Verifier(pk, params, rng)
    state, cmt1 = prover_commit1(sk, pk, params, randomness)
    cmt2 = prover_commit2(state, verifier.challenge1(cmt1))
    rsp = prover_respond(state, verifier.challenge2(cmt2))
    return verifier.decide(rsp)
