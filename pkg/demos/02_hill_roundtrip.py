"""
Hill cipher round trip with tensor-product keys
===============================================

A session key is born as 32 seed bytes.  The seed is expanded by hashing
into a stream of 2x2 matrix candidates; the first s with odd determinant
are kept and their Kronecker product is the encryption matrix (dimension
2^s).  Both ends derive the same key from the same seed, so only the seed
ever needs to travel.
"""

import random

from hcie import hill

rng = random.Random(42)
seed = hill.random_seed(rng)
print("session seed:", seed.hex())

# --- derivation is deterministic and tensor-structured ----------------------
key = hill.derive_key(seed, dim_log2=4)
print("key dimension:", key.dim, "x", key.dim)
print("built from", len(key.factors), "invertible 2x2 factors, e.g.", key.factors[0].rows)

again = hill.derive_key(seed, dim_log2=4)
print("re-derived key identical:", key.forward == again.forward)

# --- stream encryption -------------------------------------------------------
# Plaintext is padded (PKCS#7 style) to a whole number of 16-byte blocks,
# each block is a column vector, and ciphertext block = K * block mod 256.
message = b"the tensor construction makes big keys from small ones"
ciphertext = hill.encrypt_stream(key, message)
print("\nplaintext  (%3d bytes): %s..." % (len(message), message[:24]))
print("ciphertext (%3d bytes): %s..." % (len(ciphertext), ciphertext[:24].hex()))

recovered = hill.decrypt_stream(key, ciphertext)
assert recovered == message
print("decrypted == plaintext:", recovered == message)

# --- padding in one picture --------------------------------------------------
padded = hill.pad(b"0123456789abcde", 16)  # 15 bytes -> one byte of 0x01
print("\npad(15 bytes, 16) ->", padded[-4:].hex(), "(ends in 01)")
padded = hill.pad(b"0123456789abcdef", 16)  # exact multiple -> a full block
print("pad(16 bytes, 16) -> length", len(padded), "(a whole extra block of 0x10)")

# --- the ECB caveat, visibly -------------------------------------------------
# Blocks are encrypted independently, so equal plaintext blocks produce
# equal ciphertext blocks.  Structure in, structure out.
repeats = hill.encrypt_stream(key, b"A" * 16 * 4)
blocks = {repeats[i : i + 16].hex() for i in range(0, 64, 16)}
print("\nfour identical plaintext blocks ->", len(blocks), "distinct ciphertext block(s)")
print("(that is the documented ECB weakness, not a bug; see the threat model)")
