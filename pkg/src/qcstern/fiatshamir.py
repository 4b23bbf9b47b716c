"""Signatures from the five-round protocol via Fiat-Shamir.

Both challenges are squeezed from SHAKE256 over the public-key digest, the
message digest and every prover message sent so far.  A signature is
``cmt1 || cmt2 || packed response``; challenges are recomputed on
verification rather than stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .codec import DecodeError, expected_response_bits, response_bytes
from .params import ParameterSet
from .protocol.core import (Challenge1, Challenge2, PublicKey, SecretKey, cmt1_bytes, cmt2_bytes,
                            prover_commit1, prover_commit2, prover_respond, verify)
from .seedexp import Tag, uniform_below, xof


def message_digest(message: bytes, params: ParameterSet) -> bytes:
    return xof(Tag.MSG, 0, message).read(params.commit_bytes)


def derive_challenge1(pk_digest: bytes, message: bytes, cmt1: bytes,
                      params: ParameterSet) -> Challenge1:
    stream = xof(Tag.CHAL1, 0, pk_digest + message_digest(message, params) + cmt1)
    k = params.k
    draws = uniform_below(stream, np.full(params.delta, params.s * k)).tolist()
    return Challenge1(tuple((c // k, c % k) for c in draws))


def derive_challenge2(pk_digest: bytes, message: bytes, cmt1: bytes, ch1: Challenge1,
                      cmt2: bytes, params: ParameterSet) -> Challenge2:
    data = pk_digest + message_digest(message, params) + cmt1 + ch1.to_bytes() + cmt2
    raw = xof(Tag.CHAL2, 0, data).read((params.delta + 7) // 8)
    value = int.from_bytes(raw, "little")
    return Challenge2(tuple((value >> i) & 1 for i in range(params.delta)))


@dataclass(frozen=True)
class Signature:
    cmt1: bytes
    cmt2: bytes
    response: bytes

    def to_bytes(self) -> bytes:
        return self.cmt1 + self.cmt2 + self.response

    def __len__(self) -> int:
        return len(self.cmt1) + len(self.cmt2) + len(self.response)

    @classmethod
    def from_bytes(cls, data: bytes, params: ParameterSet) -> "Signature":
        a, b = cmt1_bytes(params), cmt2_bytes(params)
        if len(data) <= a + b:
            raise DecodeError("signature too short")
        return cls(bytes(data[:a]), bytes(data[a:a + b]), bytes(data[a + b:]))


def sign(sk: SecretKey, pk: PublicKey, params: ParameterSet, message: bytes,
         randomness: bytes) -> Signature:
    digest = pk.digest()
    state, cmt1 = prover_commit1(sk, pk, params, randomness)
    ch1 = derive_challenge1(digest, message, cmt1, params)
    cmt2 = prover_commit2(state, ch1)
    ch2 = derive_challenge2(digest, message, cmt1, ch1, cmt2, params)
    return Signature(cmt1, cmt2, prover_respond(state, ch2))


def signature_challenges(pk: PublicKey, params: ParameterSet, message: bytes,
                         sig: Signature) -> tuple[Challenge1, Challenge2]:
    digest = pk.digest()
    ch1 = derive_challenge1(digest, message, sig.cmt1, params)
    return ch1, derive_challenge2(digest, message, sig.cmt1, ch1, sig.cmt2, params)


def verify_signature(pk: PublicKey, params: ParameterSet, message: bytes, sig) -> bool:
    try:
        if not isinstance(sig, Signature):
            sig = Signature.from_bytes(sig, params)
        if len(sig.cmt1) != cmt1_bytes(params) or len(sig.cmt2) != cmt2_bytes(params):
            return False
    except DecodeError:
        return False
    ch1, ch2 = signature_challenges(pk, params, message, sig)
    return verify(pk, params, sig.cmt1, ch1, sig.cmt2, ch2, sig.response)


class SizeEstimate(NamedTuple):
    formula: float
    exact: float


def formula_signature_bits(lam: int, delta: int, n: int) -> float:
    """Average length for rate-1/2 codes: 4 lam + delta (2.75 lam + 0.75 n)."""
    return 4 * lam + delta * (2.75 * lam + 0.75 * n)


def expected_signature_bits(params: ParameterSet) -> SizeEstimate:
    """Closed-form mean size in bits, and the exact mean for this configuration.

    The exact value accounts for the unpaired seed when delta is odd and for
    any disabled optimization; it excludes the final byte padding.
    """
    cmts = 8 * (cmt1_bytes(params) + cmt2_bytes(params))
    return SizeEstimate(formula_signature_bits(params.lam, params.delta, params.n),
                        cmts + expected_response_bits(params))


def signature_size(params: ParameterSet, ch2) -> int:
    """Exact signature length in bytes for second-challenge bits ``ch2``."""
    return cmt1_bytes(params) + cmt2_bytes(params) + response_bytes(params, ch2)
