"""
Choosing the number of iterations
=================================

delta has to beat two things: the soundness bound, which depends on how many
rewound transcripts the extractor needs, and the attack that guesses the
first challenge on most iterations and the second on the rest.
"""

from qcstern.params import (alpha_star, delta_min_kz, delta_min_soundness, kz_attack,
                            log2_binomial, pi_star, select_parameters)

lam, n, k, w = 128, 1306, 653, 137
print("log2 C(n, w) = %.4f, fits in n - k = %d bits" % (log2_binomial(n, w), n - k))

alpha = alpha_star(n, k, w, lam)
print("alpha* =", alpha)

for s in (1, 4, 20):
    p = pi_star(alpha, s, k)
    print("s=%-2d  pi*=%.6f  delta_sound=%d  delta_kz=%d"
          % (s, p, delta_min_soundness(lam, p), delta_min_kz(lam, s * k)))

# Where the guessing attack puts its split.
cost, tau = kz_attack(151, k)
print("at delta=151, s=1: best split tau=%d, cost 2^%.2f" % (tau, cost))

print()
print(select_parameters(lam, n, k, w, 4).format())
