"""Independent oracles and transcript builders shared by the unit and acceptance tests."""

from fractions import Fraction
import math
import random

from qcstern.protocol import (Challenge1, Challenge2, Transcript, prover_commit1, prover_commit2,
                              prover_respond)


def exact_alpha_star(n, k, w, lam):
    c = math.comb(n, w)
    alpha = 2
    # eps(alpha) = C^(alpha-1) / 2^((n-k)(alpha-2)) <= 2^-lam
    while c ** (alpha - 1) * 2 ** lam > 2 ** ((n - k) * (alpha - 2)):
        alpha += 1
    return alpha


def exact_delta_soundness(lam, s, k, alpha):
    num, den = s * k + alpha - 1, 2 * s * k
    delta = 1
    while num ** delta * 2 ** lam > den ** delta:
        delta += 1
    return delta


def exact_tail(delta, sk, t):
    p = Fraction(1, sk)
    return sum(math.comb(delta, i) * p ** i * (1 - p) ** (delta - i) for i in range(t, delta + 1))


def exact_kz_secure(delta, sk, lam):
    """True iff 1/P(tau) + 2^(delta-tau) >= 2^lam for every tau."""
    bound = 2 ** lam
    return all(1 / exact_tail(delta, sk, tau) + 2 ** (delta - tau) >= bound
               for tau in range(delta + 1))


def exact_delta_kz(sk, lam, start):
    delta = start
    while not exact_kz_secure(delta, sk, lam):
        delta += 1
    assert not exact_kz_secure(delta - 1, sk, lam), "start too high"
    return delta


def random_challenges(params, rng):
    ch1 = Challenge1(tuple((rng.randrange(params.s), rng.randrange(params.k))
                           for _ in range(params.delta)))
    return ch1, Challenge2(tuple(rng.randrange(2) for _ in range(params.delta)))


def honest_transcript(sk, pk, params, randomness, ch1, ch2) -> Transcript:
    state, cmt1 = prover_commit1(sk, pk, params, randomness)
    cmt2 = prover_commit2(state, ch1)
    return Transcript(cmt1, ch1, cmt2, ch2, prover_respond(state, ch2))


def forked_pairs(sk, pk, params, alpha, iteration=0, randomness=b"fork" * 4, seed=0):
    """``alpha`` couples of transcripts sharing Cmt1, forked on Ch1 at ``iteration``.

    Rewinding is replayed by rerunning the prover on the same randomness.
    """
    rng = random.Random(seed)
    base1, base2 = random_challenges(params, rng)
    entries = rng.sample([(s, r) for s in range(params.s) for r in range(params.k)], alpha)
    pairs = []
    for entry in entries:
        e = list(base1.entries)
        e[iteration] = entry
        ch1 = Challenge1(tuple(e))
        couple = []
        for b in (0, 1):
            bits = list(base2.bits)
            bits[iteration] = b
            couple.append(honest_transcript(sk, pk, params, randomness, ch1, Challenge2(tuple(bits))))
        pairs.append(tuple(couple))
    return pairs
