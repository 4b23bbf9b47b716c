import pytest

from support import exact_alpha_star, exact_delta_kz, exact_delta_soundness, exact_tail

from qcstern.fiatshamir import expected_signature_bits
from qcstern.params import (OPTIMIZATIONS, QCS_128_S1, QCS_128_S4, QCS_128_S20, TOY,
                            ParameterError, ParameterSet, _log2_tail, alpha_star,
                            builtin_parameter_sets, cw_capacity_ok, delta_min_kz,
                            delta_min_soundness, get_parameter_set, kz_attack, kz_cost_log2,
                            log2_binomial, log2_epsilon, params_from_id, paramset_id, pi_star,
                            public_key_bytes, select_parameters)

N, K, W, LAM = 1306, 653, 137, 128


def test_alpha_star_pinned():
    assert exact_alpha_star(N, K, W, LAM) == 32
    assert alpha_star(N, K, W, LAM) == 32
    assert log2_epsilon(32, N, K, W) <= -LAM < log2_epsilon(31, N, K, W)


@pytest.mark.parametrize("s,expect", [(1, 138), (4, 131), (20, 129)])
def test_delta_soundness_pinned(s, expect):
    assert exact_delta_soundness(LAM, s, K, 32) == expect
    assert delta_min_soundness(LAM, pi_star(32, s, K)) == expect


@pytest.mark.parametrize("s,expect", [(1, 151), (4, 145), (20, 141)])
def test_delta_kz_matches_exact_oracle(s, expect):
    assert exact_delta_kz(s * K, LAM, expect - 3) == expect
    assert delta_min_kz(LAM, s * K) == expect


def test_log2_binomial_full_size():
    assert log2_binomial(N, W) == pytest.approx(627.7522, abs=1e-4)
    assert cw_capacity_ok(N, K, W)


@pytest.mark.parametrize("sk", range(2, 9))
def test_tail_matches_rationals(sk):
    for delta in range(1, 13):
        tail = _log2_tail(delta, sk)
        for t in range(delta + 1):
            exact = exact_tail(delta, sk, t)
            assert 2.0 ** tail[t] == pytest.approx(float(exact), rel=1e-9)


@pytest.mark.parametrize("sk", [2, 5, 653, 4 * 653, 20 * 653])
def test_kz_cost_monotone(sk):
    costs = [kz_cost_log2(d, sk) for d in range(1, 200)]
    assert all(b >= a - 1e-9 for a, b in zip(costs, costs[1:]))


def test_kz_split():
    cost, tau = kz_attack(151, 653)
    assert 128 <= cost < 128.5 and tau == 23


def test_soundness_at_one_half_is_lambda():
    for lam in (1, 8, 64, 128, 256):
        assert delta_min_soundness(lam, 0.5) == lam


def test_pi_star_bounds():
    assert pi_star(1, 1, 653) == 0.5
    with pytest.raises(ValueError):
        pi_star(654, 1, 653)


@pytest.mark.parametrize("s,target", [(1, 151), (4, 145), (20, 141)])
def test_select_parameters(s, target):
    report = select_parameters(LAM, N, K, W, s)
    assert abs(report.delta_selected - target) <= 2
    assert report.alpha_star == 32
    params = {1: QCS_128_S1, 4: QCS_128_S4, 20: QCS_128_S20}[s]
    assert report.expected_sig_bytes == expected_signature_bits(params).formula / 8
    assert report.delta_selected == max(report.delta_soundness, report.delta_kz)
    text = report.format()
    assert "alpha_star" in text and "32" in text


def test_toy_set_is_not_secure():
    with pytest.raises(ParameterError):
        select_parameters(TOY.lam, TOY.n, TOY.k, TOY.w, TOY.s)


def test_builtin_sets():
    for p in builtin_parameter_sets():
        assert cw_capacity_ok(p.n, p.k, p.w)
        assert get_parameter_set(p.name.upper()) is p
    assert [p.delta for p in (QCS_128_S1, QCS_128_S4, QCS_128_S20)] == [151, 145, 141]
    with pytest.raises(ParameterError):
        get_parameter_set("QCS-256")


def test_invariants_enforced():
    with pytest.raises(ParameterError):
        ParameterSet("bad", lam=128, k=8, w=3, delta=4, s=1)  # C(16, 3) > 2^8
    ParameterSet("ok", lam=128, k=8, w=3, delta=4, s=1, cw_compression=False)
    with pytest.raises(ParameterError):
        ParameterSet("bad", lam=100, k=8, w=2, delta=4, s=1)
    with pytest.raises(ParameterError):
        ParameterSet("bad", lam=128, k=8, w=0, delta=4, s=1)
    with pytest.raises(ParameterError):
        TOY.with_options(turbo=False)


def test_paramset_ids_roundtrip():
    for base in builtin_parameter_sets():
        for mask in range(16):
            p = base.with_options(**{n: not (mask >> i & 1) for i, n in enumerate(OPTIMIZATIONS)})
            ident = paramset_id(p)
            assert ident == paramset_id(base) | mask << 4
            assert params_from_id(ident) == p
    with pytest.raises(ParameterError):
        params_from_id(0x0F)
    with pytest.raises(ParameterError):
        paramset_id(ParameterSet("custom", lam=128, k=9, w=2, delta=4, s=1))


def test_public_key_conventions():
    assert [public_key_bytes(p, "n-bit") for p in (QCS_128_S1, QCS_128_S4, QCS_128_S20)] \
        == [179, 669, 3281]
    assert [public_key_bytes(p) for p in (QCS_128_S1, QCS_128_S4, QCS_128_S20)] == [98, 344, 1656]
    with pytest.raises(ValueError):
        public_key_bytes(TOY, "m-bit")
