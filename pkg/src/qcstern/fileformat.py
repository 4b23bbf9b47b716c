"""Binary containers for keys and signatures.

Every file is ``magic (4) || version (1) || parameter-set id (1) || payload``.
The header is validated before the payload is looked at.
"""

from __future__ import annotations

from .codec import DecodeError
from .fiatshamir import Signature
from .params import ParameterError, ParameterSet, paramset_id, params_from_id
from .protocol.core import PublicKey, SecretKey

VERSION = 1
MAGIC = {
    "secret-key": b"QCSK",
    "public-key": b"QCPK",
    "signature": b"QCSG",
}
HEADER_BYTES = 6


class FormatError(ValueError):
    """A file that is not a well-formed container of the expected kind."""


def pack(kind: str, params: ParameterSet, payload: bytes) -> bytes:
    return MAGIC[kind] + bytes([VERSION, paramset_id(params)]) + payload


def unpack(kind: str, data: bytes) -> tuple[ParameterSet, bytes]:
    if len(data) < HEADER_BYTES:
        raise FormatError("file too short for a %s header" % kind)
    if data[:4] != MAGIC[kind]:
        found = next((k for k, m in MAGIC.items() if m == data[:4]), None)
        hint = " (this is a %s file)" % found if found else ""
        raise FormatError("bad magic for %s%s" % (kind, hint))
    if data[4] != VERSION:
        raise FormatError("unsupported %s version %d" % (kind, data[4]))
    try:
        params = params_from_id(data[5])
    except ParameterError as exc:
        raise FormatError(str(exc)) from None
    return params, bytes(data[HEADER_BYTES:])


def dump_secret_key(sk: SecretKey, params: ParameterSet) -> bytes:
    return pack("secret-key", params, sk.to_bytes())


def dump_public_key(pk: PublicKey, params: ParameterSet) -> bytes:
    return pack("public-key", params, pk.to_bytes())


def dump_signature(sig: Signature, params: ParameterSet) -> bytes:
    return pack("signature", params, sig.to_bytes())


def load_secret_key(data: bytes) -> tuple[ParameterSet, SecretKey]:
    params, payload = unpack("secret-key", data)
    try:
        return params, SecretKey.from_bytes(payload, params)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def load_public_key(data: bytes) -> tuple[ParameterSet, PublicKey]:
    params, payload = unpack("public-key", data)
    try:
        return params, PublicKey.from_bytes(payload, params)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def load_signature(data: bytes) -> tuple[ParameterSet, Signature]:
    params, payload = unpack("signature", data)
    try:
        return params, Signature.from_bytes(payload, params)
    except DecodeError as exc:
        raise FormatError(str(exc)) from None
