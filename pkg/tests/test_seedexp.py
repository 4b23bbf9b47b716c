import hashlib
import itertools
import math

import numpy as np
import pytest
from scipy import stats

from qcstern.seedexp import (Tag, derive_pair, derive_seed, expand_circulant, expand_permutation,
                             expand_vector, expand_weight_w, uniform_below, xof)

SEED = bytes(16)


def _reference_uniform_below(tag, index, data, bounds):
    """Straight-line rejection sampler read off the framing rules."""
    width = max(1, ((max(bounds) - 1).bit_length() + 7) // 8)
    stream = hashlib.shake_256(bytes([tag]) + index.to_bytes(4, "big") + data).digest(1 << 16)
    pos = 0
    out = [None] * len(bounds)
    pending = list(range(len(bounds)))
    while pending:
        still = []
        for i in pending:
            word = int.from_bytes(stream[pos:pos + width], "big")
            pos += width
            cand = word & ((1 << (bounds[i] - 1).bit_length()) - 1)
            if cand < bounds[i]:
                out[i] = cand
            else:
                still.append(i)
        pending = still
    return out


def test_xof_framing():
    data = b"payload"
    expect = hashlib.shake_256(b"\x04" + (7).to_bytes(4, "big") + data).digest(100)
    s = xof(Tag.VECTOR, 7, data)
    assert s.read(10) + s.read(90) == expect


def test_uniform_below_matches_reference():
    bounds = [1, 2, 3, 5, 17, 255, 256, 257, 1000, 65536]
    got = uniform_below(xof(Tag.CHAL1, 3, b"x"), bounds).tolist()
    assert got == _reference_uniform_below(Tag.CHAL1, 3, b"x", bounds)
    assert all(0 <= g < b for g, b in zip(got, bounds))


def test_permutation_matches_fisher_yates_reference():
    n = 50
    picks = _reference_uniform_below(Tag.PERM, 9, SEED, list(range(n, 1, -1)))
    images = list(range(n))
    for i, j in zip(range(n - 1, 0, -1), picks):
        images[i], images[j] = images[j], images[i]
    assert expand_permutation(SEED, Tag.PERM, 9, n).images.tolist() == images


def test_deterministic_and_domain_separated():
    a = expand_vector(SEED, Tag.VECTOR, 0, 256)
    assert a == expand_vector(SEED, Tag.VECTOR, 0, 256)
    assert a != expand_vector(SEED, Tag.VECTOR, 1, 256)
    assert a != expand_vector(SEED, Tag.SECRET, 0, 256)
    assert derive_seed(SEED, Tag.SEED, 0) != derive_seed(SEED, Tag.SEED, 1)
    left, right = derive_pair(SEED, 0)
    assert left != right and (left, right) != derive_pair(SEED, 1)
    assert expand_circulant(SEED, Tag.MATRIX, 31) is expand_circulant(SEED, Tag.MATRIX, 31)


@pytest.mark.parametrize("n,w", [(1, 1), (10, 0), (10, 10), (1306, 137), (16, 2)])
def test_weight_w_exact(n, w):
    for i in range(5):
        v = expand_weight_w(SEED, Tag.SECRET, i, n, w)
        assert v.length == n and v.weight() == w


def test_index_range_checked():
    with pytest.raises(ValueError):
        xof(Tag.SEED, 1 << 32, b"")
    with pytest.raises(ValueError):
        uniform_below(xof(Tag.SEED, 0, b""), [0])


def _chi_square_p(counts):
    counts = np.asarray(counts, dtype=float)
    return stats.chisquare(counts).pvalue


def test_weight_two_supports_uniform():
    n, w, trials = 6, 2, 30_000
    index = {c: i for i, c in enumerate(itertools.combinations(range(n), w))}
    counts = np.zeros(math.comb(n, w))
    for t in range(trials):
        counts[index[tuple(expand_weight_w(SEED, Tag.SECRET, t, n, w).support())]] += 1
    assert _chi_square_p(counts) > 0.001


def test_s4_permutations_uniform():
    index = {p: i for i, p in enumerate(itertools.permutations(range(4)))}
    counts = np.zeros(24)
    for t in range(48_000):
        counts[index[tuple(expand_permutation(SEED, Tag.PERM, t, 4).images.tolist())]] += 1
    assert _chi_square_p(counts) > 0.001


def test_vector_bits_unbiased():
    n, trials = 64, 4000
    ones = np.zeros(n)
    for t in range(trials):
        ones += expand_vector(SEED, Tag.VECTOR, t, n).bits()
    # each position ~ Binomial(trials, 1/2); 5 sigma per coordinate
    assert np.all(np.abs(ones - trials / 2) < 5 * math.sqrt(trials) / 2)


def test_uniform_below_non_power_of_two():
    stream = xof(Tag.CHAL1, 0, b"u")
    draws = uniform_below(stream, np.full(60_000, 653))
    counts = np.bincount(draws, minlength=653)
    assert counts.size == 653
    assert _chi_square_p(counts) > 0.001
