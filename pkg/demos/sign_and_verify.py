"""
Signing with QCS-128-s1
=======================

Key generation, a signature, its verification, and where the bytes go.
"""

import time

from qcstern.fiatshamir import (expected_signature_bits, sign, signature_challenges,
                                signature_size, verify_signature)
from qcstern.params import QCS_128_S1, public_key_bytes
from qcstern.protocol import keygen

params = QCS_128_S1
sk, pk = keygen(params, b"demo-root-seed!!")
print("secret key %d B, public key %d B" % (len(sk.to_bytes()), public_key_bytes(params)))

message = b"the quick brown fox"
start = time.perf_counter()
sig = sign(sk, pk, params, message, b"demo-randomness!")
print("signed in %.0f ms, %d B" % (1000 * (time.perf_counter() - start), len(sig)))
print("verifies:", verify_signature(pk, params, message, sig))
print("verifies on another message:", verify_signature(pk, params, b"the quick brown cat", sig))

# The length depends only on the second challenge: each b=1 iteration sends a
# compressed constant-weight word, each b=0 iteration a full n-bit vector.
_, ch2 = signature_challenges(pk, params, message, sig)
print("ones in Ch2: %d of %d" % (sum(ch2.bits), params.delta))
print("predicted size %d B" % signature_size(params, ch2.bits))
est = expected_signature_bits(params)
print("mean size: closed form %.0f B, exact %.1f B" % (est.formula / 8, est.exact / 8))

# Switching an optimization off changes the byte count but not the challenges.
for flag in ("seed_pairing", "cw_compression"):
    plain = params.with_options(**{flag: False})
    other = sign(sk, pk, plain, message, b"demo-randomness!")
    print("%-15s off: %d B (%+d)" % (flag, len(other), len(other) - len(sig)))
