"""Length-prefixed frames carrying the five-round protocol over a byte stream.

Frame: ``length (4, big-endian) || type (1) || payload``, where ``length``
counts the payload only.  A session is exactly

    prover -> CMT1, verifier -> CH1, prover -> CMT2, verifier -> CH2,
    prover -> RSP, verifier -> RESULT

and either side may send ERROR (UTF-8 text) instead of its next frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
import json
import secrets
import socket
import socketserver
import struct
import threading

from .codec import DecodeError
from .params import ParameterSet, paramset_id, params_from_id
from .protocol.core import (Challenge1, Challenge2, PublicKey, SecretKey, Verifier, cmt1_bytes,
                            cmt2_bytes, prover_commit1, prover_commit2, prover_respond, verify)

MAX_FRAME = 64 * 1024
DEFAULT_TIMEOUT = 30.0
_HEADER = struct.Struct(">IB")


class MsgType(IntEnum):
    CMT1 = 1
    CH1 = 2
    CMT2 = 3
    CH2 = 4
    RSP = 5
    RESULT = 6
    ERROR = 7


class FrameError(Exception):
    """Malformed, oversized, unexpected or missing frame."""


class PeerError(FrameError):
    """The other side sent an ERROR frame."""


def encode_frame(kind: MsgType, payload: bytes, max_size: int = MAX_FRAME) -> bytes:
    if len(payload) > max_size:
        raise FrameError("payload of %d bytes exceeds the %d-byte maximum" % (len(payload), max_size))
    return _HEADER.pack(len(payload), kind) + payload


def decode_frame(data: bytes, max_size: int = MAX_FRAME) -> tuple[MsgType, bytes, int]:
    """Parse one frame from the front of ``data``; returns (type, payload, bytes used)."""
    if len(data) < _HEADER.size:
        raise FrameError("truncated frame header")
    length, kind = _HEADER.unpack_from(data)
    if length > max_size:
        raise FrameError("frame of %d bytes exceeds the %d-byte maximum" % (length, max_size))
    try:
        kind = MsgType(kind)
    except ValueError:
        raise FrameError("unknown frame type %d" % kind) from None
    end = _HEADER.size + length
    if len(data) < end:
        raise FrameError("truncated frame payload")
    return kind, bytes(data[_HEADER.size:end]), end


class FramedChannel:
    """Frame I/O over a connected socket with a per-operation timeout."""

    def __init__(self, sock: socket.socket, timeout: float | None = DEFAULT_TIMEOUT,
                 max_size: int = MAX_FRAME):
        self.sock = sock
        self.max_size = max_size
        sock.settimeout(timeout)

    def _recv_exact(self, n: int) -> bytes:
        chunks, need = [], n
        while need:
            try:
                chunk = self.sock.recv(min(need, 65536))
            except socket.timeout:
                raise FrameError("timed out waiting for the peer") from None
            except OSError as exc:
                raise FrameError("connection error: %s" % exc) from None
            if not chunk:
                raise FrameError("connection closed by peer")
            chunks.append(chunk)
            need -= len(chunk)
        return b"".join(chunks)

    def send(self, kind: MsgType, payload: bytes = b""):
        try:
            self.sock.sendall(encode_frame(kind, payload, self.max_size))
        except OSError as exc:
            raise FrameError("connection error: %s" % exc) from None

    def recv(self) -> tuple[MsgType, bytes]:
        head = self._recv_exact(_HEADER.size)
        length, _ = _HEADER.unpack(head)
        if length > self.max_size:
            raise FrameError("frame of %d bytes exceeds the %d-byte maximum" % (length, self.max_size))
        kind, payload, _ = decode_frame(head + self._recv_exact(length), self.max_size)
        return kind, payload

    def expect(self, kind: MsgType) -> bytes:
        got, payload = self.recv()
        if got == MsgType.ERROR and kind != MsgType.ERROR:
            raise PeerError(payload.decode("utf-8", "replace"))
        if got != kind:
            raise FrameError("expected %s frame, got %s" % (kind.name, got.name))
        return payload

    def fail(self, message: str):
        """Best-effort ERROR frame; the connection may already be gone."""
        try:
            self.send(MsgType.ERROR, message.encode("utf-8")[: self.max_size])
        except FrameError:
            pass


# ---- transcripts ----

@dataclass
class SessionTranscript:
    paramset: int
    public_key: bytes
    cmt1: bytes = b""
    ch1: bytes = b""
    cmt2: bytes = b""
    ch2: bytes = b""
    rsp: bytes = b""
    accepted: bool | None = None
    error: str | None = None

    def to_json(self) -> str:
        doc = {"paramset": self.paramset, "public_key": self.public_key.hex(),
               "cmt1": self.cmt1.hex(), "ch1": self.ch1.hex(), "cmt2": self.cmt2.hex(),
               "ch2": self.ch2.hex(), "rsp": self.rsp.hex(),
               "accepted": self.accepted, "error": self.error}
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "SessionTranscript":
        try:
            doc = json.loads(text)
            return cls(int(doc["paramset"]), bytes.fromhex(doc["public_key"]),
                       *(bytes.fromhex(doc[k]) for k in ("cmt1", "ch1", "cmt2", "ch2", "rsp")),
                       accepted=doc.get("accepted"), error=doc.get("error"))
        except (ValueError, KeyError, TypeError) as exc:
            raise FrameError("unreadable transcript log: %s" % exc) from None

    def replay(self) -> bool:
        """Re-run the verifier's decision offline on the logged messages."""
        try:
            params = params_from_id(self.paramset)
            pk = PublicKey.from_bytes(self.public_key, params)
            ch1 = Challenge1.from_bytes(self.ch1, params)
            ch2 = Challenge2.from_bytes(self.ch2, params)
        except ValueError:
            return False
        return verify(pk, params, self.cmt1, ch1, self.cmt2, ch2, self.rsp)


# ---- sessions ----

def prover_session(channel: FramedChannel, sk: SecretKey, pk: PublicKey, params: ParameterSet,
                   randomness: bytes | None = None) -> bool:
    """Authenticate to a verifier; returns the verifier's verdict.

    Raises :class:`FrameError` on any protocol violation by the peer.
    """
    randomness = randomness if randomness is not None else secrets.token_bytes(params.seed_bytes)
    state, cmt1 = prover_commit1(sk, pk, params, randomness)
    channel.send(MsgType.CMT1, cmt1)
    try:
        ch1 = Challenge1.from_bytes(channel.expect(MsgType.CH1), params)
        channel.send(MsgType.CMT2, prover_commit2(state, ch1))
        ch2 = Challenge2.from_bytes(channel.expect(MsgType.CH2), params)
    except DecodeError as exc:
        channel.fail(str(exc))
        raise FrameError("bad challenge: %s" % exc) from None
    channel.send(MsgType.RSP, prover_respond(state, ch2))
    result = channel.expect(MsgType.RESULT)
    if result not in (b"\x00", b"\x01"):
        raise FrameError("malformed RESULT frame")
    return result == b"\x01"


def verifier_session(channel: FramedChannel, pk: PublicKey, params: ParameterSet,
                     rng=None, transcript: SessionTranscript | None = None) -> bool:
    """Run one session as verifier; challenges come from ``rng`` (OS entropy by default).

    Every failure is reported to the prover as an ERROR frame before
    :class:`FrameError` propagates.
    """
    verifier = Verifier(pk, params, rng)
    t = transcript if transcript is not None else SessionTranscript(paramset_id(params), pk.to_bytes())
    try:
        t.cmt1 = channel.expect(MsgType.CMT1)
        if len(t.cmt1) != cmt1_bytes(params):
            raise FrameError("CMT1 must be %d bytes" % cmt1_bytes(params))
        t.ch1 = verifier.challenge1(t.cmt1).to_bytes()
        channel.send(MsgType.CH1, t.ch1)
        t.cmt2 = channel.expect(MsgType.CMT2)
        if len(t.cmt2) != cmt2_bytes(params):
            raise FrameError("CMT2 must be %d bytes" % cmt2_bytes(params))
        t.ch2 = verifier.challenge2(t.cmt2).to_bytes()
        channel.send(MsgType.CH2, t.ch2)
        t.rsp = channel.expect(MsgType.RSP)
    except FrameError as exc:
        t.error = str(exc)
        if not isinstance(exc, PeerError):
            channel.fail(str(exc))
        raise
    t.accepted = verifier.decide(t.rsp)
    channel.send(MsgType.RESULT, b"\x01" if t.accepted else b"\x00")
    return t.accepted


def connect(endpoint: tuple[str, int], timeout: float | None = DEFAULT_TIMEOUT) -> FramedChannel:
    try:
        sock = socket.create_connection(endpoint, timeout=timeout)
    except OSError as exc:
        raise FrameError("cannot connect to %s:%d: %s" % (*endpoint, exc)) from None
    return FramedChannel(sock, timeout)


@dataclass
class SessionRecord:
    peer: tuple
    transcript: SessionTranscript
    accepted: bool = False


class VerifierServer(socketserver.ThreadingMixIn, socketserver.TCPServer):
    """Threaded verifier endpoint; each connection gets its own protocol state."""

    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, endpoint, pk: PublicKey, params: ParameterSet,
                 timeout: float | None = DEFAULT_TIMEOUT, on_session=None):
        self.pk, self.params, self.session_timeout = pk, params, timeout
        self.on_session = on_session
        self.records: list[SessionRecord] = []
        self._lock = threading.Lock()
        super().__init__(endpoint, _VerifierHandler)

    def _finish(self, record: SessionRecord):
        with self._lock:
            self.records.append(record)
        if self.on_session is not None:
            self.on_session(record)


class _VerifierHandler(socketserver.BaseRequestHandler):
    def handle(self):
        server: VerifierServer = self.server
        channel = FramedChannel(self.request, server.session_timeout)
        t = SessionTranscript(paramset_id(server.params), server.pk.to_bytes())
        record = SessionRecord(self.client_address, t)
        try:
            record.accepted = verifier_session(channel, server.pk, server.params, transcript=t)
        except FrameError:
            record.accepted = False
        finally:
            server._finish(record)
