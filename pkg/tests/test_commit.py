import hashlib

from qcstern.commit import COMMIT_BYTES, com, commit, open_commitment
from qcstern.seedexp import Tag


def test_commitment_is_tagged_truncated_shake():
    assert commit(Tag.COMMIT, b"abc") == hashlib.shake_256(b"\x07abc").digest(32)
    assert len(commit(Tag.COMMIT, b"", size=16)) == 16
    assert com(b"a", b"bc") == commit(Tag.COMMIT, b"abc")
    assert COMMIT_BYTES == 32


def test_binding_and_opening():
    c = commit(Tag.COMMIT, b"message")
    assert open_commitment(c, Tag.COMMIT, b"message")
    assert not open_commitment(c, Tag.COMMIT, b"messagf")
    assert not open_commitment(c, Tag.MSG, b"message")


def test_no_collisions_on_small_domain():
    outs = {commit(Tag.COMMIT, i.to_bytes(2, "big")) for i in range(1 << 14)}
    assert len(outs) == 1 << 14
