"""Hill block cipher over Z_256 with tensor-product key construction.

The symmetric half of the hybrid system.  A key is an invertible n x n
matrix K over the byte ring; a plaintext block is a column vector of n bytes
and its ciphertext is K * block mod 256.  Large keys are never random n x n
draws: they are built as the Kronecker product of s seed-derived invertible
2 x 2 matrices, so n = 2^s and invertibility is inherited factor by factor.

The cipher is linear, which is the point of
:func:`recover_key_known_plaintext`: n plaintext/ciphertext pairs with
independent plaintexts give the key back exactly.  See the threat model
document before using this for anything but study.
"""

from __future__ import annotations

import hashlib
import random
import secrets
from dataclasses import dataclass
from functools import reduce as _reduce
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DimensionError,
    InconsistentPairsError,
    InsufficientPlaintextError,
    PaddingError,
)
from .ring import (
    BYTE_RING,
    Block,
    RingMatrix,
    RingParams,
    invert,
    is_invertible,
    kronecker,
    mat_mul,
    mat_vec,
)

#: Session seeds are exactly this many bytes.
SEED_LEN = 32

#: Tensor height bounds: keys go from 2x2 (s=1) up to 64x64 (s=6).
MIN_DIM_LOG2 = 1
MAX_DIM_LOG2 = 6


@dataclass(frozen=True)
class HillKey:
    """An invertible encryption matrix with its precomputed inverse.

    ``factors`` holds the 2x2 Kronecker factors when the key was built by
    tensor construction, in product order, or ``None`` for ad-hoc keys.
    """

    ring: RingParams
    forward: RingMatrix
    inverse: RingMatrix
    factors: Optional[Tuple[RingMatrix, ...]] = None

    @property
    def dim(self) -> int:
        return self.forward.dim

    @classmethod
    def from_matrix(cls, forward: RingMatrix, ring: RingParams = BYTE_RING) -> "HillKey":
        """Wrap an explicit matrix, computing its inverse (raises if singular)."""
        return cls(ring=ring, forward=forward, inverse=invert(forward, ring))


def _keystream(seed: bytes):
    """Infinite byte generator: SHA-256(seed || counter) blocks, counter a
    big-endian u32 starting at 0.  Consumed strictly left to right so any
    implementation of the derivation agrees byte for byte."""
    counter = 0
    while True:
        block = hashlib.sha256(seed + counter.to_bytes(4, "big")).digest()
        yield from block
        counter += 1


def derive_key(seed: bytes, dim_log2: int) -> HillKey:
    """Deterministically expand a 32-byte seed into a 2^s x 2^s Hill key.

    The keystream is read four bytes at a time as a candidate
    [[a, b], [c, d]] over Z_256; candidates with an even determinant are
    skipped.  The first s accepted candidates A_1 .. A_s form the key
    K = A_1 (x) A_2 (x) ... (x) A_s, and the inverse is assembled from the
    factor inverses, since (A (x) B)^-1 = A^-1 (x) B^-1.
    """
    if len(seed) != SEED_LEN:
        raise ValueError(f"seed must be exactly {SEED_LEN} bytes, got {len(seed)}")
    if not MIN_DIM_LOG2 <= dim_log2 <= MAX_DIM_LOG2:
        raise ValueError(
            f"dim_log2 must be in [{MIN_DIM_LOG2}, {MAX_DIM_LOG2}], got {dim_log2}"
        )
    stream = _keystream(seed)
    factors = []
    while len(factors) < dim_log2:
        a, b, c, d = (next(stream) for _ in range(4))
        if (a * d - b * c) & 1:
            factors.append(RingMatrix(((a, b), (c, d))))
    forward = _reduce(lambda x, y: kronecker(x, y, BYTE_RING), factors)
    inverse = _reduce(
        lambda x, y: kronecker(x, y, BYTE_RING),
        [invert(f, BYTE_RING) for f in factors],
    )
    return HillKey(ring=BYTE_RING, forward=forward, inverse=inverse, factors=tuple(factors))


def random_seed(rng: Optional[random.Random] = None) -> bytes:
    """Fresh 32-byte session seed, from ``secrets`` unless an rng is given."""
    if rng is None:
        return secrets.token_bytes(SEED_LEN)
    return rng.randbytes(SEED_LEN)


def encrypt_block(key: HillKey, m: Block) -> Block:
    """C = K * M mod 256 for a single block."""
    if m.dim != key.forward.dim:
        raise DimensionError(f"block dim {m.dim} does not match key dim {key.forward.dim}")
    return mat_vec(key.forward, m, key.ring)


def decrypt_block(key: HillKey, c: Block) -> Block:
    """M = K^-1 * C mod 256 for a single block."""
    if c.dim != key.inverse.dim:
        raise DimensionError(f"block dim {c.dim} does not match key dim {key.inverse.dim}")
    return mat_vec(key.inverse, c, key.ring)


def pad(data: bytes, block_len: int) -> bytes:
    """PKCS#7-style padding: append k bytes of value k, k in [1, block_len].

    A full padding block is added when the input length is already a
    multiple, so the output length is always a strictly larger multiple of
    ``block_len``.
    """
    if not 1 <= block_len <= 255:
        raise ValueError(f"block length must be in [1, 255], got {block_len}")
    k = block_len - (len(data) % block_len)
    return data + bytes([k]) * k


def unpad(data: bytes, block_len: int) -> bytes:
    """Strip and validate padding produced by :func:`pad`."""
    if not 1 <= block_len <= 255:
        raise ValueError(f"block length must be in [1, 255], got {block_len}")
    if len(data) == 0 or len(data) % block_len != 0:
        raise PaddingError("invalid padding: length not a positive multiple of block length")
    k = data[-1]
    if not 1 <= k <= block_len:
        raise PaddingError("invalid padding")
    if data[-k:] != bytes([k]) * k:
        raise PaddingError("invalid padding")
    return data[:-k]


def _forward_array(matrix: RingMatrix) -> np.ndarray:
    return np.array(matrix.rows, dtype=np.uint8)


def encrypt_stream(key: HillKey, plaintext: bytes) -> bytes:
    """Pad and encrypt a byte string block by block (ECB over blocks).

    Bytes map to ring elements by identity and block position i is vector
    row i.  The whole stream is done as one matrix product: uint8 matmul
    accumulates with C unsigned wraparound, which is exactly arithmetic in
    Z_256.
    """
    n = key.forward.dim
    data = pad(plaintext, n)
    blocks = np.frombuffer(data, dtype=np.uint8).reshape(-1, n)
    # c = K m per column vector <=> row-block @ K^T
    out = blocks @ _forward_array(key.forward).T
    return out.tobytes()


def decrypt_stream(key: HillKey, ciphertext: bytes) -> bytes:
    """Invert :func:`encrypt_stream`: per-block decrypt, then unpad."""
    n = key.inverse.dim
    if len(ciphertext) == 0 or len(ciphertext) % n != 0:
        raise DimensionError(
            f"ciphertext length {len(ciphertext)} is not a positive multiple of {n}"
        )
    blocks = np.frombuffer(ciphertext, dtype=np.uint8).reshape(-1, n)
    out = blocks @ _forward_array(key.inverse).T
    return unpad(out.tobytes(), n)


def recover_key_known_plaintext(
    pairs: Sequence[Tuple[Block, Block]], ring: RingParams
) -> RingMatrix:
    """Recover the key matrix from known (plaintext, ciphertext) block pairs.

    Picks n pairs whose plaintexts are independent (greedy over GF(2);
    a set of columns is invertible mod 2^m iff it is independent mod 2),
    solves K = C * P^-1, then checks K against every supplied pair.

    Raises :class:`InsufficientPlaintextError` when no invertible plaintext
    matrix can be selected, and :class:`InconsistentPairsError` when the
    pairs are not all explained by one linear key.
    """
    if not pairs:
        raise InsufficientPlaintextError("insufficient independent plaintext")
    n = pairs[0][0].dim
    for pt, ct in pairs:
        if pt.dim != n or ct.dim != n:
            raise DimensionError("all pairs must share the key dimension")

    chosen = []
    basis = []  # GF(2) echelon bitmasks of the chosen plaintexts
    for pt, ct in pairs:
        v = sum((e & 1) << i for i, e in enumerate(pt.entries))
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
            chosen.append((pt, ct))
            if len(chosen) == n:
                break
    if len(chosen) < n:
        raise InsufficientPlaintextError("insufficient independent plaintext")

    p_cols = RingMatrix(tuple(tuple(pt.entries[i] for pt, _ in chosen) for i in range(n)))
    c_cols = RingMatrix(tuple(tuple(ct.entries[i] for _, ct in chosen) for i in range(n)))
    key = mat_mul(c_cols, invert(p_cols, ring), ring)
    for pt, ct in pairs:
        if mat_vec(key, pt, ring) != ct:
            raise InconsistentPairsError(
                "pairs are not consistent with a single linear key"
            )
    return key
