"""
Breaking the Hill cipher with known plaintext
=============================================

The cipher is linear: ciphertext = K * plaintext mod 256.  Anyone holding n
plaintext/ciphertext block pairs whose plaintexts are linearly independent
can solve for the n x n key exactly — the tensor construction changes
nothing, because the product of matrices is still a matrix.  This is why
the hybrid scheme rotates to a fresh seed for every envelope.
"""

import random

from hcie import hill
from hcie.errors import InsufficientPlaintextError
from hcie.ring import BYTE_RING, Block

rng = random.Random(99)

# The victim derives a 4x4 key from a secret seed.
secret_seed = hill.random_seed(rng)
victim_key = hill.derive_key(secret_seed, dim_log2=2)
print("victim key (kept secret):")
for row in victim_key.forward.rows:
    print("   ", row)

# The attacker observes 8 plaintext/ciphertext block pairs.
pairs = []
for _ in range(8):
    p = Block.from_entries([rng.randrange(256) for _ in range(4)], BYTE_RING)
    pairs.append((p, hill.encrypt_block(victim_key, p)))
print("\nattacker has", len(pairs), "known (plaintext, ciphertext) pairs")

# Solve K = C * P^-1 using any 4 pairs with independent plaintexts.
recovered = hill.recover_key_known_plaintext(pairs, BYTE_RING)
print("recovered key:")
for row in recovered.rows:
    print("   ", row)
assert recovered == victim_key.forward
print("exact match with the secret key:", recovered == victim_key.forward)

# With the key, every other message under this seed falls.
other_ct = hill.encrypt_stream(victim_key, b"second message, same session key")
stolen = hill.decrypt_stream(hill.HillKey.from_matrix(recovered), other_ct)
print("\ndecrypting another intercept with the recovered key:", stolen)

# The attack needs independent plaintexts; identical blocks tell it nothing.
same = Block.from_entries([1, 2, 3, 4], BYTE_RING)
try:
    hill.recover_key_known_plaintext(
        [(same, hill.encrypt_block(victim_key, same))] * 8, BYTE_RING
    )
except InsufficientPlaintextError as exc:
    print("\nall-equal plaintexts are correctly refused:", exc)
