"""Hash commitments ``Com(m) = SHAKE256(tag || m)`` truncated to 2*lambda bits.

Commitments are deterministic: each committed message already carries a
fresh uniform vector or permutation, which is what hides it.  There is no
separate opening randomness, matching the signature size accounting.
"""

import hashlib
import hmac

from .seedexp import Tag

COMMIT_BYTES = 32


def commit(tag: int, payload: bytes, size: int = COMMIT_BYTES) -> bytes:
    return hashlib.shake_256(bytes([tag]) + bytes(payload)).digest(size)


def open_commitment(c: bytes, tag: int, payload: bytes) -> bool:
    return hmac.compare_digest(c, commit(tag, payload, len(c)))


# convenience for the protocol: everything it commits to uses the COMMIT tag
def com(*parts: bytes, size: int = COMMIT_BYTES) -> bytes:
    return commit(Tag.COMMIT, b"".join(parts), size)
