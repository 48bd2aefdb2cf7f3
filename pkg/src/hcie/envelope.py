"""The mixed-encryption container shared by disk (.hcie files) and wire.

A sealed envelope carries everything the recipient needs: the session seed
encapsulated under their public key, the Hill ciphertext, the sender's
signature over the plaintext, and a fingerprint naming which sender key to
verify against.  The binary layout is fixed and big-endian throughout so any
implementation produces identical bytes:

    magic "HCIE" (4) | version u8 | dim_log2 u8 | reserved u16 = 0
    | sender_fingerprint (32)
    | seed_ct_len u32 | encapsulated_seed
    | sig_len u32 | signature
    | plaintext_len u64 | ct_len u64 | ciphertext

Opening never returns partial plaintext: every check (decapsulation,
padding, recorded length, signature, sender fingerprint) must pass first.
"""

from __future__ import annotations

import random
import struct
from dataclasses import dataclass
from typing import Optional

from . import hill, rsa
from .errors import (
    EnvelopeFormatError,
    FingerprintMismatchError,
    PlaintextLengthError,
    SignatureError,
)

MAGIC = b"HCIE"
VERSION = 1

_HEADER = struct.Struct(">4sBBH32s")


@dataclass(frozen=True)
class Envelope:
    version: int
    dim_log2: int
    sender_fingerprint: bytes
    encapsulated_seed: bytes
    signature: bytes
    plaintext_len: int
    ciphertext: bytes

    def __post_init__(self):
        if self.version != VERSION:
            raise EnvelopeFormatError(f"unsupported version {self.version}")
        if not hill.MIN_DIM_LOG2 <= self.dim_log2 <= hill.MAX_DIM_LOG2:
            raise EnvelopeFormatError(f"dim_log2 {self.dim_log2} out of range")
        if len(self.sender_fingerprint) != 32:
            raise EnvelopeFormatError("sender fingerprint must be 32 bytes")
        block = 1 << self.dim_log2
        if len(self.ciphertext) == 0 or len(self.ciphertext) % block != 0:
            raise EnvelopeFormatError(
                "ciphertext length must be a positive multiple of the block size"
            )
        if not self.plaintext_len < len(self.ciphertext) <= self.plaintext_len + block:
            raise EnvelopeFormatError(
                "plaintext length inconsistent with ciphertext length"
            )


def seal(
    plaintext: bytes,
    recipient: rsa.RsaPublicKey,
    sender: rsa.RsaPrivateKey,
    sender_pub: rsa.RsaPublicKey,
    rng: Optional[random.Random] = None,
    dim_log2: int = 4,
) -> Envelope:
    """Seal a payload: fresh seed, Hill-encrypt, encapsulate, sign.

    The signature covers the plaintext, not the ciphertext, so it is checked
    after decryption on the receiving side.
    """
    if sender_pub.n != sender.n or sender_pub.e != sender.e:
        raise ValueError("sender_pub does not match the sender private key")
    seed = hill.random_seed(rng)
    key = hill.derive_key(seed, dim_log2)
    ciphertext = hill.encrypt_stream(key, plaintext)
    encapsulated = rsa.encrypt_seed(recipient, seed, rng)
    signature = rsa.sign(sender, plaintext)
    sig_bytes = signature.value.to_bytes(sender.byte_length(), "big")
    return Envelope(
        version=VERSION,
        dim_log2=dim_log2,
        sender_fingerprint=rsa.fingerprint(sender_pub),
        encapsulated_seed=encapsulated,
        signature=sig_bytes,
        plaintext_len=len(plaintext),
        ciphertext=ciphertext,
    )


def open_envelope(
    env: Envelope, recipient: rsa.RsaPrivateKey, sender_pub: rsa.RsaPublicKey
) -> bytes:
    """Open a sealed envelope, or raise; never returns partial plaintext.

    Failure causes stay distinguishable by exception type: decapsulation,
    stream padding, recorded-length mismatch, signature, fingerprint.
    """
    seed = rsa.decrypt_seed(recipient, env.encapsulated_seed)
    key = hill.derive_key(seed, env.dim_log2)
    plaintext = hill.decrypt_stream(key, env.ciphertext)
    if len(plaintext) != env.plaintext_len:
        raise PlaintextLengthError(
            f"recovered {len(plaintext)} bytes, envelope records {env.plaintext_len}"
        )
    sig = rsa.Signature(int.from_bytes(env.signature, "big"))
    if not rsa.verify(sender_pub, plaintext, sig):
        raise SignatureError("signature verification failed")
    if env.sender_fingerprint != rsa.fingerprint(sender_pub):
        raise FingerprintMismatchError("sender fingerprint mismatch")
    return plaintext


def serialize(env: Envelope) -> bytes:
    parts = [
        _HEADER.pack(MAGIC, env.version, env.dim_log2, 0, env.sender_fingerprint),
        struct.pack(">I", len(env.encapsulated_seed)),
        env.encapsulated_seed,
        struct.pack(">I", len(env.signature)),
        env.signature,
        struct.pack(">QQ", env.plaintext_len, len(env.ciphertext)),
        env.ciphertext,
    ]
    return b"".join(parts)


def _take(data: bytes, offset: int, count: int, what: str) -> bytes:
    if offset + count > len(data):
        raise EnvelopeFormatError(f"truncated {what}")
    return data[offset : offset + count]


def parse(data: bytes) -> Envelope:
    """Parse a serialized envelope, with a distinct error per defect."""
    head = _take(data, 0, _HEADER.size, "header")
    magic, version, dim_log2, reserved, fingerprint = _HEADER.unpack(head)
    if magic != MAGIC:
        raise EnvelopeFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise EnvelopeFormatError(f"unsupported version {version}")
    if reserved != 0:
        raise EnvelopeFormatError("reserved field must be zero")
    offset = _HEADER.size

    (seed_ct_len,) = struct.unpack(">I", _take(data, offset, 4, "seed length field"))
    offset += 4
    encapsulated = _take(data, offset, seed_ct_len, "encapsulated seed")
    offset += seed_ct_len

    (sig_len,) = struct.unpack(">I", _take(data, offset, 4, "signature length field"))
    offset += 4
    signature = _take(data, offset, sig_len, "signature")
    offset += sig_len

    plaintext_len, ct_len = struct.unpack(">QQ", _take(data, offset, 16, "length fields"))
    offset += 16
    remaining = len(data) - offset
    if remaining < ct_len:
        raise EnvelopeFormatError("truncated ciphertext")
    if remaining > ct_len:
        raise EnvelopeFormatError("trailing data after ciphertext")
    ciphertext = data[offset:]

    return Envelope(
        version=version,
        dim_log2=dim_log2,
        sender_fingerprint=fingerprint,
        encapsulated_seed=encapsulated,
        signature=signature,
        plaintext_len=plaintext_len,
        ciphertext=ciphertext,
    )
