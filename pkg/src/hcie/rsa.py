"""Textbook RSA: key generation, seed encapsulation, digest-then-sign.

Deliberately educational-grade.  Encapsulation uses v1.5-style random
padding and signatures are raw modular exponentiation of a SHA-256 digest;
there is no OAEP, no PSS, and nothing here is constant time.  The hybrid
layer only ever pushes a 32-byte session seed and a digest through these
primitives.

Key generation draws primes at ``bits/2`` with 40 Miller-Rabin rounds and
uses the Carmichael function lcm(p-1, q-1) for the private exponent.
"""

from __future__ import annotations

import hashlib
import math
import random
import secrets
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .errors import DecapsulationError, KeyFileError

MILLER_RABIN_ROUNDS = 40
DEFAULT_PUBLIC_EXPONENT = 65537
#: Key sizes accepted without the insecure flag.
STANDARD_BITS = (512, 1024, 2048)
#: Smallest size the insecure test profile will generate.
MIN_INSECURE_BITS = 32

_KEYFILE_MAGIC = "hcirsa-v1"

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
                 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139,
                 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
                 227, 229, 233, 239, 241, 251]


def sha256(data: bytes) -> bytes:
    """SHA-256 digest (32 bytes) of a byte string."""
    return hashlib.sha256(data).digest()


@dataclass(frozen=True)
class RsaPublicKey:
    n: int
    e: int

    def byte_length(self) -> int:
        """Length of the modulus in bytes; every ciphertext and signature
        under this key is encoded at exactly this width."""
        return (self.n.bit_length() + 7) // 8


@dataclass(frozen=True)
class RsaPrivateKey:
    n: int
    e: int
    d: int
    p: int
    q: int

    def byte_length(self) -> int:
        return (self.n.bit_length() + 7) // 8

    def public(self) -> RsaPublicKey:
        return RsaPublicKey(self.n, self.e)


@dataclass(frozen=True)
class Signature:
    """A signature is one integer: sha256(message) raised to d mod n."""

    value: int


def is_probable_prime(
    n: int, rounds: int = MILLER_RABIN_ROUNDS, rng: Optional[random.Random] = None
) -> bool:
    """Miller-Rabin primality test with random bases.

    Each round catches a composite with probability >= 3/4, so 40 rounds
    leave a false-prime chance below 2^-80.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for _ in range(rounds):
        if rng is None:
            a = 2 + secrets.randbelow(n - 3)
        else:
            a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = pow(x, 2, n)
            if x == n - 1:
                break
        else:
            return False
    return True


def _random_prime(bits: int, rng: Optional[random.Random]) -> int:
    # Top two bits set so the product of two such primes has exactly
    # 2*bits bits; low bit set for oddness.
    while True:
        if rng is None:
            cand = secrets.randbits(bits)
        else:
            cand = rng.getrandbits(bits)
        cand |= (1 << (bits - 1)) | (1 << (bits - 2)) | 1
        if is_probable_prime(cand, rng=rng):
            return cand


def _select_public_exponent(lam: int, n: int) -> int:
    e = DEFAULT_PUBLIC_EXPONENT
    while math.gcd(e, lam) != 1:
        e += 2
        if e >= n:
            raise ValueError("modulus too small to admit a public exponent")
    return e


def keygen(
    bits: int, rng: Optional[random.Random] = None, insecure: bool = False
) -> Tuple[RsaPublicKey, RsaPrivateKey]:
    """Generate a matched RSA key pair with an n of exactly ``bits`` bits.

    ``bits`` must be one of 512/1024/2048 unless ``insecure`` is set, in
    which case anything >= 32 (and even) is allowed so tests can brute-force
    tiny keys.  Pass a seeded ``random.Random`` for reproducible pairs;
    the default draws from the OS.
    """
    if insecure:
        if bits < MIN_INSECURE_BITS or bits % 2 != 0:
            raise ValueError(f"insecure keygen needs an even bit count >= {MIN_INSECURE_BITS}")
    elif bits not in STANDARD_BITS:
        raise ValueError(
            f"key size must be one of {STANDARD_BITS} (or pass insecure=True)"
        )
    p = _random_prime(bits // 2, rng)
    while True:
        q = _random_prime(bits // 2, rng)
        if q != p:
            break
    if q > p:
        p, q = q, p
    lam = math.lcm(p - 1, q - 1)
    n = p * q
    e = _select_public_exponent(lam, n)
    d = pow(e, -1, lam)
    return RsaPublicKey(n, e), RsaPrivateKey(n=n, e=e, d=d, p=p, q=q)


def _nonzero_bytes(count: int, rng: Optional[random.Random]) -> bytes:
    out = bytearray()
    while len(out) < count:
        chunk = rng.randbytes(count - len(out)) if rng else secrets.token_bytes(count - len(out))
        out += chunk.replace(b"\x00", b"")
    return bytes(out)


def encrypt_seed(
    pub: RsaPublicKey, seed: bytes, rng: Optional[random.Random] = None
) -> bytes:
    """Encapsulate a 32-byte session seed under a public key.

    Builds the block ``00 02 <random nonzero fill> 00 <seed>`` at exactly
    modulus width, then returns (block^e mod n) as fixed-width big-endian
    bytes.  The random fill makes repeated encapsulations of one seed
    differ.
    """
    if len(seed) != 32:
        raise ValueError(f"seed must be exactly 32 bytes, got {len(seed)}")
    k = pub.byte_length()
    if k < 64:
        raise ValueError(f"modulus too small to encapsulate a seed: {k} bytes, need >= 64")
    fill = _nonzero_bytes(k - 3 - len(seed), rng)
    block = b"\x00\x02" + fill + b"\x00" + seed
    x = int.from_bytes(block, "big")
    return pow(x, pub.e, pub.n).to_bytes(k, "big")


def decrypt_seed(priv: RsaPrivateKey, ct: bytes) -> bytes:
    """Recover a session seed; any malformation raises the same uniform
    :class:`DecapsulationError` so nothing about the failure leaks."""
    k = priv.byte_length()
    if len(ct) != k:
        raise DecapsulationError("decapsulation failed")
    x = int.from_bytes(ct, "big")
    if x >= priv.n:
        raise DecapsulationError("decapsulation failed")
    block = pow(x, priv.d, priv.n).to_bytes(k, "big")
    if block[0] != 0 or block[1] != 2:
        raise DecapsulationError("decapsulation failed")
    sep = block.find(b"\x00", 2)
    if sep == -1 or len(block) - sep - 1 != 32:
        raise DecapsulationError("decapsulation failed")
    return block[sep + 1 :]


def sign(priv: RsaPrivateKey, message: bytes) -> Signature:
    """Sign a message: the SHA-256 digest, big-endian, raised to d mod n."""
    if priv.n <= (1 << 256):
        raise ValueError("modulus too small to sign a 256-bit digest")
    digest = int.from_bytes(sha256(message), "big")
    return Signature(pow(digest, priv.d, priv.n))


def verify(pub: RsaPublicKey, message: bytes, sig: Signature) -> bool:
    """True iff sig^e mod n equals the message digest.  Total: malformed
    signatures return False, they never raise."""
    try:
        value = sig.value
        if not isinstance(value, int) or not 0 <= value < pub.n:
            return False
        return pow(value, pub.e, pub.n) == int.from_bytes(sha256(message), "big")
    except (AttributeError, TypeError):
        return False


def serialize_key(key: Union[RsaPublicKey, RsaPrivateKey]) -> bytes:
    """Textual key file: magic, role, then hex fields one per line."""
    if isinstance(key, RsaPrivateKey):
        lines = [_KEYFILE_MAGIC, "private", f"{key.n:x}", f"{key.e:x}",
                 f"{key.d:x}", f"{key.p:x}", f"{key.q:x}"]
    elif isinstance(key, RsaPublicKey):
        lines = [_KEYFILE_MAGIC, "public", f"{key.n:x}", f"{key.e:x}"]
    else:
        raise TypeError(f"not an RSA key: {type(key).__name__}")
    return ("\n".join(lines) + "\n").encode("ascii")


def parse_key(data: bytes) -> Union[RsaPublicKey, RsaPrivateKey]:
    """Inverse of :func:`serialize_key`; raises :class:`KeyFileError` on
    anything malformed."""
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise KeyFileError("key file is not ASCII text") from exc
    lines = text.splitlines()
    if len(lines) < 2 or lines[0] != _KEYFILE_MAGIC:
        raise KeyFileError("bad key file magic")
    role = lines[1]
    fields = lines[2:]
    try:
        values = [int(f, 16) for f in fields]
    except ValueError as exc:
        raise KeyFileError("bad hex field in key file") from exc
    if role == "public":
        if len(values) != 2:
            raise KeyFileError(f"public key file needs 2 fields, got {len(values)}")
        return RsaPublicKey(n=values[0], e=values[1])
    if role == "private":
        if len(values) != 5:
            raise KeyFileError(f"private key file needs 5 fields, got {len(values)}")
        return RsaPrivateKey(n=values[0], e=values[1], d=values[2], p=values[3], q=values[4])
    raise KeyFileError(f"unknown key role {role!r}")


def fingerprint(pub: RsaPublicKey) -> bytes:
    """SHA-256 of the canonical public key file bytes; identifies a sender."""
    return sha256(serialize_key(pub))
