"""Parameter sets and the security calculator used to choose them.

Binomials are exact integers; logarithms are only taken at the end, since
tails like ``C(151, 23) / 653**23`` underflow doubles.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np


class ParameterError(ValueError):
    pass


OPTIMIZATIONS = ("seed_for_vector", "seed_pairing", "cw_compression", "commitment_aggregation")


@dataclass(frozen=True)
class ParameterSet:
    name: str
    lam: int
    k: int
    w: int
    delta: int
    s: int
    seed_for_vector: bool = True
    seed_pairing: bool = True
    cw_compression: bool = True
    commitment_aggregation: bool = True

    def __post_init__(self):
        if self.lam <= 0 or self.lam % 8:
            raise ParameterError("lambda must be a positive multiple of 8")
        if self.k <= 0 or not 0 < self.w < self.n:
            raise ParameterError("need k > 0 and 0 < w < n")
        if self.delta < 1 or self.s < 1:
            raise ParameterError("need delta >= 1 and s >= 1")
        if self.n > 1 << 16 or self.s * self.k > 1 << 16:
            raise ParameterError("sizes exceed the 16-bit wire encodings")
        if self.cw_compression and not cw_capacity_ok(self.n, self.k, self.w):
            raise ParameterError("C(%d, %d) exceeds 2^%d; disable cw_compression"
                                 % (self.n, self.w, self.n - self.k))

    @property
    def n(self) -> int:
        return 2 * self.k

    @property
    def seed_bytes(self) -> int:
        return self.lam // 8

    @property
    def commit_bytes(self) -> int:
        return self.lam // 4

    @property
    def cw_bits(self) -> int:
        return self.n - self.k

    def with_options(self, **flags) -> "ParameterSet":
        unknown = set(flags) - set(OPTIMIZATIONS)
        if unknown:
            raise ParameterError("unknown optimizations: %s" % ", ".join(sorted(unknown)))
        return dataclasses.replace(self, **flags)

    def unoptimized(self) -> "ParameterSet":
        return self.with_options(**{name: False for name in OPTIMIZATIONS})

    def disabled(self) -> tuple[str, ...]:
        return tuple(name for name in OPTIMIZATIONS if not getattr(self, name))


def cw_capacity_ok(n: int, k: int, w: int) -> bool:
    return math.comb(n, w) <= 1 << (n - k)


# Built-in sets.  Decoding hardness (BJMM, after the sqrt(N) multi-target
# loss) is assumed for these rows, not recomputed here.
TOY = ParameterSet("TOY", lam=128, k=8, w=2, delta=4, s=1)
QCS_128_S1 = ParameterSet("QCS-128-s1", lam=128, k=653, w=137, delta=151, s=1)
QCS_128_S4 = ParameterSet("QCS-128-s4", lam=128, k=653, w=137, delta=145, s=4)
QCS_128_S20 = ParameterSet("QCS-128-s20", lam=128, k=653, w=137, delta=141, s=20)

DECODING_ASSUMPTION = ("BJMM decoding of w errors in the [n, k] quasi-cyclic code costs "
                       ">= 2^lambda after the sqrt(N) multi-target loss, N = s*k")

_BY_ID = {0: TOY, 1: QCS_128_S1, 2: QCS_128_S4, 3: QCS_128_S20}
_BY_NAME = {p.name.lower(): p for p in _BY_ID.values()}

def builtin_parameter_sets() -> list[ParameterSet]:
    return list(_BY_ID.values())


def get_parameter_set(name: str) -> ParameterSet:
    try:
        return _BY_NAME[name.lower()]
    except KeyError:
        raise ParameterError("unknown parameter set %r (known: %s)"
                             % (name, ", ".join(p.name for p in _BY_ID.values()))) from None


def paramset_id(params: ParameterSet) -> int:
    """One byte: low nibble names the base set, high nibble flags disabled optimizations."""
    base = dataclasses.replace(params, **{name: True for name in OPTIMIZATIONS})
    for ident, p in _BY_ID.items():
        if p == base:
            break
    else:
        raise ParameterError("%s is not a built-in parameter set" % params.name)
    mask = sum(1 << i for i, name in enumerate(OPTIMIZATIONS) if not getattr(params, name))
    return ident | (mask << 4)


def params_from_id(byte: int) -> ParameterSet:
    base = _BY_ID.get(byte & 0x0F)
    if base is None:
        raise ParameterError("unknown parameter-set id %d" % (byte & 0x0F))
    mask = byte >> 4
    return base.with_options(**{name: False for i, name in enumerate(OPTIMIZATIONS) if mask >> i & 1})


def public_key_bytes(params: ParameterSet, convention: str = "k-bit") -> int:
    """Public key size: seed plus s syndromes.

    ``"k-bit"`` is what this package stores.  ``"n-bit"`` charges n bits
    per syndrome, the accounting of the published size comparison.
    """
    if convention == "k-bit":
        return params.seed_bytes + params.s * ((params.k + 7) // 8)
    if convention == "n-bit":
        return (params.lam + params.s * params.n) // 8
    raise ValueError("convention must be 'k-bit' or 'n-bit'")


# ---- security calculator ----

def log2_binomial(n: int, w: int) -> float:
    return math.log2(math.comb(n, w))


def log2_epsilon(alpha: int, n: int, k: int, w: int) -> float:
    if alpha < 2:
        raise ValueError("alpha must be >= 2")
    # (alpha-1) log2 C(n,w) - (n-k)(alpha-2), exponent kept as an exact integer ratio
    num = math.comb(n, w) ** (alpha - 1)
    return math.log2(num) - (n - k) * (alpha - 2)


def alpha_star(n: int, k: int, w: int, lam: int) -> int:
    """Smallest alpha >= 2 whose reduction failure probability is <= 2^-lam."""
    if log2_epsilon(2, n, k, w) <= -lam:
        return 2
    if math.comb(n, w) >= 1 << (n - k):
        raise ParameterError("epsilon(alpha) does not decrease: C(n,w) >= 2^(n-k)")
    slope = (n - k) - log2_binomial(n, w)
    alpha = max(2, int((log2_epsilon(2, n, k, w) + lam) / slope))
    while alpha > 2 and log2_epsilon(alpha - 1, n, k, w) <= -lam:
        alpha -= 1
    while log2_epsilon(alpha, n, k, w) > -lam:
        alpha += 1
    return alpha


def pi_star(alpha: int, s: int, k: int) -> float:
    if s < 1 or k < 1:
        raise ValueError("s and k must be positive")
    if not 1 <= alpha <= s * k:
        raise ValueError("alpha must lie in [1, s*k]")
    return (s * k + alpha - 1) / (2 * s * k)


def delta_min_soundness(lam: int, pi: float) -> int:
    if not 0 < pi < 1:
        raise ParameterError("per-iteration soundness must lie in (0, 1)")
    if lam == 0:
        return 0
    return math.ceil(-lam / math.log2(pi) - 1e-12)


def _log2_tail(delta: int, sk: int) -> np.ndarray:
    """``out[t] = log2 P[Binomial(delta, 1/sk) >= t]`` for t in 0..delta."""
    ln2 = math.log(2)
    lp = -math.log2(sk)
    lq = math.log2(sk - 1) - math.log2(sk) if sk > 1 else -math.inf
    terms = np.array([
        (math.lgamma(delta + 1) - math.lgamma(t + 1) - math.lgamma(delta - t + 1)) / ln2
        + t * lp + ((delta - t) * lq if delta > t else 0.0)
        for t in range(delta + 1)])
    return np.logaddexp2.accumulate(terms[::-1])[::-1]


def kz_attack(delta: int, sk: int) -> tuple[float, int]:
    """Cheapest forgery cost (log2) over the guess split, and the split used."""
    if delta < 1 or sk < 2:
        raise ValueError("need delta >= 1 and sk >= 2")
    tail = _log2_tail(delta, sk)
    taus = np.arange(delta + 1)
    costs = np.logaddexp2(-tail, (delta - taus).astype(float))
    best = int(np.argmin(costs))
    return float(costs[best]), best


def kz_cost_log2(delta: int, sk: int) -> float:
    return kz_attack(delta, sk)[0]


def delta_min_kz(lam: int, sk: int, limit: int = 10_000) -> int:
    for delta in range(1, limit):
        if kz_cost_log2(delta, sk) >= lam:
            return delta
    raise ParameterError("no delta below %d reaches %d bits" % (limit, lam))


def multi_target_margin_bits(s: int, k: int) -> float:
    return 0.5 * math.log2(s * k)


@dataclass(frozen=True)
class SecurityReport:
    lam: int
    n: int
    k: int
    w: int
    s: int
    alpha_star: int
    log2_epsilon: float
    pi_star: float
    delta_soundness: int
    delta_kz: int
    delta_selected: int
    kz_cost_log2: float
    kz_tau: int
    sqrtN_margin_bits: float
    expected_sig_bytes: float

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    def format(self) -> str:
        rows = [(f.name, getattr(self, f.name)) for f in dataclasses.fields(self)]
        width = max(len(name) for name, _ in rows)
        out = []
        for name, value in rows:
            if isinstance(value, float):
                value = "%.4f" % value
            out.append("%-*s  %s" % (width, name, value))
        return "\n".join(out)


def select_parameters(lam: int, n: int, k: int, w: int, s: int) -> SecurityReport:
    if n != 2 * k:
        raise ParameterError("only rate-1/2 codes (n = 2k) are supported")
    alpha = alpha_star(n, k, w, lam)
    if alpha > s * k:
        raise ParameterError("alpha* = %d exceeds s*k = %d: the code is too small for %d-bit "
                             "soundness" % (alpha, s * k, lam))
    pi = pi_star(alpha, s, k)
    d_sound = delta_min_soundness(lam, pi)
    d_kz = delta_min_kz(lam, s * k)
    delta = max(d_sound, d_kz)
    cost, tau = kz_attack(delta, s * k)

    from .fiatshamir import expected_signature_bits
    probe = ParameterSet("probe", lam=lam, k=k, w=w, delta=delta, s=s,
                         cw_compression=cw_capacity_ok(n, k, w))
    return SecurityReport(
        lam=lam, n=n, k=k, w=w, s=s,
        alpha_star=alpha,
        log2_epsilon=log2_epsilon(alpha, n, k, w),
        pi_star=pi,
        delta_soundness=d_sound,
        delta_kz=d_kz,
        delta_selected=delta,
        kz_cost_log2=cost,
        kz_tau=tau,
        sqrtN_margin_bits=multi_target_margin_bits(s, k),
        expected_sig_bytes=expected_signature_bits(probe).formula / 8,
    )
