"""Classic three-round Stern protocol, one iteration, and its cheating provers.

Honest run::

    c1 = Com(pi || H u),  c2 = Com(pi[u]),  c3 = Com(pi[u + x])
    Ch = 0 -> (pi, u);  Ch = 1 -> (pi, u + x);  Ch = 2 -> (pi[u], pi[x])

A prover without ``x`` can prepare commitments that survive any two of the
three challenges; :func:`stern_cheat` builds each of the three variants.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import BitVector, Permutation
from ..commit import com
from ..params import ParameterSet
from ..seedexp import Tag, derive_seed, expand_permutation, expand_vector, expand_weight_w
from .core import PublicKey, SecretKey, expand_secrets

STRATEGIES = {"pass01": (0, 1), "pass02": (0, 2), "pass12": (1, 2)}


@dataclass(frozen=True)
class SternTranscript:
    c1: bytes
    c2: bytes
    c3: bytes
    ch: int
    rsp: tuple


def _masks(params: ParameterSet, randomness: bytes) -> tuple[Permutation, BitVector]:
    seed = derive_seed(randomness, Tag.SEED, 0, params.seed_bytes)
    return (expand_permutation(seed, Tag.PERM, 0, params.n),
            expand_vector(seed, Tag.VECTOR, 0, params.n))


def _com(params, *parts):
    return com(*parts, size=params.commit_bytes)


class SternProver:
    def __init__(self, x: BitVector, pk: PublicKey, params: ParameterSet, randomness: bytes):
        self.params = params
        H = pk.matrix(params)
        self.perm, self.u = _masks(params, randomness)
        self.x = x
        self.c1 = _com(params, self.perm.to_bytes(), H.syndrome(self.u).to_bytes())
        self.c2 = _com(params, self.perm.apply(self.u).to_bytes())
        self.c3 = _com(params, self.perm.apply(self.u ^ x).to_bytes())

    def respond(self, ch: int) -> tuple:
        if ch == 0:
            return (self.perm, self.u)
        if ch == 1:
            return (self.perm, self.u ^ self.x)
        if ch == 2:
            return (self.perm.apply(self.u), self.perm.apply(self.x))
        raise ValueError("challenge must be 0, 1 or 2")

    def transcript(self, ch: int) -> SternTranscript:
        return SternTranscript(self.c1, self.c2, self.c3, ch, self.respond(ch))


def stern_baseline_round(sk: SecretKey, pk: PublicKey, params: ParameterSet, ch: int,
                         randomness: bytes, key_index: int = 0) -> SternTranscript:
    x = expand_secrets(sk, params)[key_index]
    return SternProver(x, pk, params, randomness).transcript(ch)


def stern_baseline_verify(pk: PublicKey, params: ParameterSet, t: SternTranscript,
                          key_index: int = 0) -> bool:
    H = pk.matrix(params)
    y = pk.syndromes[key_index]
    n = params.n
    try:
        a, b = t.rsp
        if t.ch in (0, 1):
            if not isinstance(a, Permutation) or a.n != n or b.length != n:
                return False
            target = H.syndrome(b) if t.ch == 0 else H.syndrome(b) ^ y
            if _com(params, a.to_bytes(), target.to_bytes()) != t.c1:
                return False
            other = (t.c2 if t.ch == 0 else t.c3)
            return _com(params, a.apply(b).to_bytes()) == other
        if t.ch == 2:
            if a.length != n or b.length != n or b.weight() != params.w:
                return False
            return (_com(params, a.to_bytes()) == t.c2
                    and _com(params, (a ^ b).to_bytes()) == t.c3)
    except (AttributeError, TypeError, ValueError):
        return False
    return False


class CheatingProver:
    """Prover holding no secret that passes exactly two challenges."""

    def __init__(self, strategy: str, pk: PublicKey, params: ParameterSet, randomness: bytes,
                 key_index: int = 0):
        if strategy not in STRATEGIES:
            raise ValueError("unknown strategy %r" % strategy)
        self.strategy = strategy
        self.params = params
        H = pk.matrix(params)
        y = pk.syndromes[key_index]
        perm, u = _masks(params, randomness)
        self.perm, self.u = perm, u

        if strategy == "pass01":
            # z with H z = H u + y, weight unconstrained
            x_fake = _any_preimage_off_weight(H, y, params)
            z = u ^ x_fake
            self._pass1 = (perm, z)
            self._pass2 = (perm.apply(u), perm.apply(x_fake))
            c1 = _com(params, perm.to_bytes(), H.syndrome(u).to_bytes())
            c3 = _com(params, perm.apply(z).to_bytes())
        else:
            # weight-w vector that is not a preimage of y
            x_fake = _wrong_weight_w(H, y, params, randomness)
            self._pass1 = (perm, u ^ x_fake)
            self._pass2 = (perm.apply(u), perm.apply(x_fake))
            if strategy == "pass02":
                c1 = _com(params, perm.to_bytes(), H.syndrome(u).to_bytes())
            else:
                c1 = _com(params, perm.to_bytes(), (H.syndrome(u ^ x_fake) ^ y).to_bytes())
            c3 = _com(params, perm.apply(u ^ x_fake).to_bytes())
        self.c1, self.c2, self.c3 = c1, _com(params, perm.apply(u).to_bytes()), c3

    def respond(self, ch: int) -> tuple:
        if ch == 0:
            return (self.perm, self.u)
        if ch == 1:
            return self._pass1
        if ch == 2:
            return self._pass2
        raise ValueError("challenge must be 0, 1 or 2")

    def transcript(self, ch: int) -> SternTranscript:
        return SternTranscript(self.c1, self.c2, self.c3, ch, self.respond(ch))


def _any_preimage_off_weight(H, y: BitVector, params: ParameterSet) -> BitVector:
    k = params.k
    for j in range(-1, k):
        e = BitVector.zeros(k) if j < 0 else BitVector.from_support(k, [j])
        x = (y ^ H.block.mul(e)).concat(e)
        if x.weight() != params.w:
            return x
    raise RuntimeError("every tried preimage has weight w")


def _wrong_weight_w(H, y: BitVector, params: ParameterSet, randomness: bytes) -> BitVector:
    for i in range(1 << 16):
        x = expand_weight_w(randomness, Tag.SECRET, i, params.n, params.w)
        if H.syndrome(x) != y:
            return x
    raise RuntimeError("could not find a non-solution")


def stern_cheat(strategy: str, pk: PublicKey, params: ParameterSet, randomness: bytes) -> CheatingProver:
    return CheatingProver(strategy, pk, params, randomness)
