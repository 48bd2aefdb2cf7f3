"""Independent SHA-256 reference, straight from FIPS 180-4.

Used as the cross-check oracle for the package's hashlib-backed digest; it
must share nothing with the implementation under test, so it never imports
hashlib or hcie.  Even the round constants are rebuilt from first
principles (integer square/cube roots of the first primes) rather than
copied from a table.
"""

import struct

_MASK32 = 0xFFFFFFFF


def _first_primes(count: int):
    primes = []
    n = 2
    while len(primes) < count:
        if all(n % p for p in primes if p * p <= n):
            primes.append(n)
        n += 1
    return primes


def _isqrt(n: int) -> int:
    x = 1 << ((n.bit_length() + 1) // 2)
    while True:
        y = (x + n // x) // 2
        if y >= x:
            return x
        x = y


def _icbrt(n: int) -> int:
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            return x
        x = y


# fractional parts of sqrt(p) / cbrt(p) for the first 8 / 64 primes,
# truncated to 32 bits, computed exactly in integer arithmetic
_H0 = tuple(_isqrt(p << 64) & _MASK32 for p in _first_primes(8))
_K = tuple(_icbrt(p << 96) & _MASK32 for p in _first_primes(64))

assert _H0[0] == 0x6A09E667 and _K[0] == 0x428A2F98, "constant derivation is wrong"


def _rotr(x: int, n: int) -> int:
    return ((x >> n) | (x << (32 - n))) & _MASK32


def sha256(data: bytes) -> bytes:
    h = list(_H0)
    bit_len = len(data) * 8
    data = data + b"\x80" + b"\x00" * ((55 - len(data)) % 64) + bit_len.to_bytes(8, "big")
    for off in range(0, len(data), 64):
        w = list(struct.unpack(">16I", data[off : off + 64]))
        for i in range(16, 64):
            s0 = _rotr(w[i - 15], 7) ^ _rotr(w[i - 15], 18) ^ (w[i - 15] >> 3)
            s1 = _rotr(w[i - 2], 17) ^ _rotr(w[i - 2], 19) ^ (w[i - 2] >> 10)
            w.append((w[i - 16] + s0 + w[i - 7] + s1) & _MASK32)
        a, b, c, d, e, f, g, hh = h
        for i in range(64):
            s1 = _rotr(e, 6) ^ _rotr(e, 11) ^ _rotr(e, 25)
            ch = (e & f) ^ (~e & g)
            t1 = (hh + s1 + ch + _K[i] + w[i]) & _MASK32
            s0 = _rotr(a, 2) ^ _rotr(a, 13) ^ _rotr(a, 22)
            maj = (a & b) ^ (a & c) ^ (b & c)
            t2 = (s0 + maj) & _MASK32
            hh, g, f, e, d, c, b, a = g, f, e, (d + t1) & _MASK32, c, b, a, (t1 + t2) & _MASK32
        h = [(x + y) & _MASK32 for x, y in zip(h, (a, b, c, d, e, f, g, hh))]
    return b"".join(x.to_bytes(4, "big") for x in h)
