"""
Quasi-cyclic structure in a few lines
=====================================

A parity-check matrix ``H = [I | A]`` with circulant ``A`` is stored as one
k-bit row.  Rotating both halves of a vector rotates its syndrome; the
whole protocol leans on that identity.
"""

import numpy as np

from qcstern.algebra import BitVector, CirculantBlock, QCParityCheck, rotate, rotate_pair

# A small instance we can print in full.
k = 7
H = QCParityCheck(CirculantBlock(BitVector.from_string("1101000")))
print(H.to_dense().astype(int))

# Syndromes through the packed representation agree with a plain matrix product.
x = BitVector.from_support(2 * k, [0, 3, 9, 12])
dense = H.to_dense().astype(int) @ x.bits().astype(int) % 2
print("syndrome  ", H.syndrome(x), "dense", "".join(map(str, dense)))

# Rotate both halves by r and the syndrome rotates by r.
for r in range(k):
    assert H.syndrome(rotate_pair(x, r)) == rotate(H.syndrome(x), r)
print("commutation holds for every shift at k =", k)

# The same check at full size, on random vectors.
rng = np.random.default_rng(0)
k = 653
H = QCParityCheck(CirculantBlock(BitVector.from_bits(rng.integers(0, 2, k))))
for _ in range(100):
    x = BitVector.from_bits(rng.integers(0, 2, 2 * k))
    r = int(rng.integers(k))
    assert H.syndrome(rotate_pair(x, r)) == rotate(H.syndrome(x), r)
print("100 random checks at k = 653 passed")
