"""
Simulator, extractor and cheaters on the TOY set
================================================

The TOY set (k=8) is far too small to be secure, which makes it convenient
for watching the proof machinery work.
"""

import random

from qcstern.algebra import rotate_pair
from qcstern.params import TOY
from qcstern.protocol import (STRATEGIES, Challenge1, Challenge2, CheatingProver, expand_secrets,
                              extract_dsd, keygen, prover_commit1, prover_commit2, prover_respond,
                              Transcript, simulate_transcript, stern_baseline_verify, verify)

sk, pk = keygen(TOY, bytes(16))
rng = random.Random(1)


def challenges():
    ch1 = Challenge1(tuple((0, rng.randrange(TOY.k)) for _ in range(TOY.delta)))
    return ch1, Challenge2(tuple(rng.randrange(2) for _ in range(TOY.delta)))


# Knowing the challenges in advance is enough to produce accepted transcripts
# without the secret.
ch1, ch2 = challenges()
cmt1, cmt2, rsp = simulate_transcript(pk, TOY, ch1, ch2, b"simulator-coins!")
print("simulated transcript accepted:", verify(pk, TOY, cmt1, ch1, cmt2, ch2, rsp))

# Rewinding: same first commitment, several first challenges, both second
# challenges.  The extractor turns these into rotations of the secret.
base1, base2 = challenges()
pairs = []
for r in (1, 4, 6):
    ch1 = Challenge1(((0, r),) + base1.entries[1:])
    couple = []
    for b in (0, 1):
        state, cmt1 = prover_commit1(sk, pk, TOY, b"same-coins-again")
        cmt2 = prover_commit2(state, ch1)
        ch2 = Challenge2((b,) + base2.bits[1:])
        couple.append((cmt1, ch1, cmt2, ch2, prover_respond(state, ch2)))
    pairs.append(tuple(couple))

solution = extract_dsd(pk, TOY, [tuple(Transcript(*t) for t in c) for c in pairs])
x = expand_secrets(sk, TOY)[0]
for z, (_, r) in zip(solution.z, solution.indices):
    print("r=%d  extracted %s  equals rot_r(x): %s" % (r, z, z == rotate_pair(x, r)))

# Against the classic three-challenge verifier, each cheating strategy
# answers exactly two challenges.
for name, passes in sorted(STRATEGIES.items()):
    cheat = CheatingProver(name, pk, TOY, b"cheater-coins!!!")
    ok = [ch for ch in range(3) if stern_baseline_verify(pk, TOY, cheat.transcript(ch))]
    print("%s answers challenges %s (designed for %s)" % (name, ok, list(passes)))
