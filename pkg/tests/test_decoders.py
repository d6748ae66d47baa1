import itertools
import math

import numpy as np
import pytest

from guessdec.channels import awgn, received_from_llr, simulate_transmission, trial_rng
from guessdec.decoders import (StopRule, dai_tau, gcd, gcd_soft_output, grand, grand_soft_output,
                               pattern_log_probability_offset)
from guessdec.errors import InputError
from guessdec.gf2core import LinearCode, brute_force_mld, random_linear_code

H74 = np.array([[1, 1, 0, 1, 1, 0, 0],
                [1, 0, 1, 1, 0, 1, 0],
                [0, 1, 1, 1, 0, 0, 1]], dtype=np.uint8)
HAMMING = LinearCode.from_parity_check(H74)


def noisy_words(code, snr, count, seed=0):
    for i in range(count):
        rng = trial_rng(seed, i)
        c = code.encode(rng.integers(0, 2, code.k, dtype=np.uint8))
        yield c, simulate_transmission(awgn(snr, code.rate), c, rng)


def exact_posteriors(code, llr):
    """P(c | y) for every codeword, by direct enumeration."""
    book = code._codebook.astype(int)
    logp = -np.logaddexp(0.0, -(1 - 2 * book) * np.asarray(llr)).sum(axis=1)
    p = np.exp(logp - logp.max())
    return code._codebook, p / p.sum()


def lookup(book, post, c):
    return post[np.flatnonzero((book == c).all(axis=1))[0]]


@pytest.mark.parametrize("code", [HAMMING, random_linear_code(14, 7, seed=3),
                                  LinearCode.from_parity_check(H74[:, ::-1])])
def test_soft_grand_and_gcd_are_maximum_likelihood(code):
    for snr in (0.0, 4.0):
        for _, rx in noisy_words(code, snr, 300):
            _, w_ml = brute_force_mld(code, rx.llr)
            g = grand(code, rx)
            c = gcd(code, rx)
            assert g.found and g.ml_certified and code.is_codeword(g.codeword)
            assert c.ml_certified and code.is_codeword(c.codeword)
            assert g.tep_soft_weight == pytest.approx(w_ml, abs=1e-9)
            assert c.tep_soft_weight == pytest.approx(w_ml, abs=1e-9)


def test_zero_syndrome_needs_one_query():
    llr = np.array([2.0, 1.0, 0.5, 3.0, 1.5, 2.5, 0.7])
    assert grand(HAMMING, llr).queries_used == 1
    res = gcd(HAMMING, llr)
    # the second information pattern is drawn only to evaluate the stop rule
    assert res.queries_used == 1 and res.ml_certified
    assert not res.codeword.any()


@pytest.mark.parametrize("order", ["hamming", "orb"])
def test_other_orders_return_codewords(order):
    code = random_linear_code(16, 8, seed=1)
    for _, rx in noisy_words(code, 2.0, 100):
        g = grand(code, rx, order=order)
        c = gcd(code, rx, order=order)
        assert code.is_codeword(g.codeword) and code.is_codeword(c.codeword)
        assert not g.ml_certified


def test_hamming_order_grand_with_wide_syndromes():
    # more than 62 parity rows exercises arbitrary-precision syndrome tags
    code = random_linear_code(70, 4, seed=2)
    for c, rx in noisy_words(code, 0.0, 10):
        g = grand(code, rx, order="hamming", l_max=3000)
        s = grand(code, rx, order="soft", l_max=3000)
        assert g.found == s.found
        if g.found:
            assert code.is_codeword(g.codeword)


def test_grand_budget_exhaustion_returns_hard_decision():
    code = random_linear_code(24, 4, seed=0)
    rx = simulate_transmission(awgn(-3.0, code.rate), np.zeros(24, dtype=np.uint8),
                               np.random.default_rng(3))
    res = grand(code, rx, l_max=5)
    if not res.found:
        assert res.budget_exhausted and res.queries_used == 5
        assert np.array_equal(res.codeword, rx.z)


def test_gcd_budget_is_monotone():
    code = random_linear_code(20, 10, seed=5)
    for _, rx in noisy_words(code, 1.0, 40):
        weights = [gcd(code, rx, stop="budget", l_max=b).tep_soft_weight for b in (1, 4, 16, 64)]
        assert all(a >= b for a, b in zip(weights, weights[1:]))
        assert gcd(code, rx, stop="budget", l_max=1).queries_used == 1


def test_dai_never_uses_more_queries_than_trivial():
    code = random_linear_code(24, 10, seed=7)
    for _, rx in noisy_words(code, 2.0, 200):
        assert gcd(code, rx, stop="dai").queries_used <= gcd(code, rx, stop="trivial").queries_used


def test_dai_tau():
    assert dai_tau(np.zeros(5)) == 0.0
    assert dai_tau([math.log(3.0)]) == pytest.approx(math.log(3.0) / 4)
    assert dai_tau([1e4, 1e5]) == 0.0
    with pytest.raises(InputError):
        dai_tau([-1.0])


def test_stop_rule_validation():
    with pytest.raises(InputError):
        StopRule("greedy")
    with pytest.raises(InputError):
        StopRule("trivial", tau=1.0)
    with pytest.raises(InputError):
        gcd(HAMMING, np.ones(7), stop="membership")
    with pytest.raises(InputError):
        grand(HAMMING, np.ones(6))


def test_list_decoding_hits_are_ordered():
    code = random_linear_code(12, 6, seed=9)
    _, rx = next(noisy_words(code, 1.0, 1))
    res = grand(code, rx, list_size=5)
    weights = [h[2] for h in res.hits]
    assert len(res.hits) == 5 and weights == sorted(weights)
    assert all(code.is_codeword(h[1]) for h in res.hits)


def test_grand_exhaustive_posteriors_are_exact():
    for _, rx in noisy_words(HAMMING, 1.0, 50):
        res = grand(HAMMING, rx, list_size=None, soft_output=True)
        book, post = exact_posteriors(HAMMING, rx.llr)
        assert len(res.hits) == 16 and res.soft.residual == pytest.approx(0.0, abs=1e-12)
        for c, p in res.soft.block_posteriors:
            assert p == pytest.approx(lookup(book, post, c), abs=1e-9)


def test_gcd_exhaustive_posteriors_are_exact():
    for _, rx in noisy_words(HAMMING, 1.0, 50):
        res = gcd(HAMMING, rx, stop="budget", soft_output=True)
        book, post = exact_posteriors(HAMMING, rx.llr)
        assert res.queries_used == 16
        for c, p in res.soft.block_posteriors:
            assert p == pytest.approx(lookup(book, post, c), abs=1e-9)


def test_gcd_short_list_posteriors_at_high_snr():
    errors = []
    for _, rx in noisy_words(HAMMING, 6.0, 300, seed=2):
        res = gcd(HAMMING, rx, stop="budget", soft_output=True, list_size=4)
        book, post = exact_posteriors(HAMMING, rx.llr)
        errors.append(max(abs(p - lookup(book, post, c)) for c, p in res.soft.block_posteriors))
    assert np.quantile(errors, 0.9) < 1e-3


def test_single_hit_posterior_formula():
    rel = np.array([0.4, 1.3, 2.0])
    p = math.exp(pattern_log_probability_offset(rel))
    out = grand_soft_output([(np.zeros(3, dtype=np.uint8), p)], [0], n=3, k=1)
    ratio = (2**1 - 1) / (2**3 - 1)
    assert out.block_posteriors[0][1] == pytest.approx(p / (p + (1 - p) * ratio))


def test_two_equal_hits_split_evenly():
    a = np.array([1, 0, 0, 0], dtype=np.uint8)
    b = np.array([0, 1, 0, 0], dtype=np.uint8)
    out = grand_soft_output([(a, 0.5), (b, 0.5)], [0, 1], n=4, k=2)
    assert [p for _, p in out.block_posteriors] == pytest.approx([0.5, 0.5])
    assert out.residual == pytest.approx(0.0)
    with pytest.raises(InputError):
        grand_soft_output([(a, 0.5)], [], n=4, k=2)


def test_gcd_soft_output_function_matches_decoder():
    _, rx = next(noisy_words(HAMMING, 2.0, 1, seed=4))
    pats = [np.array(p, dtype=np.uint8) for p in itertools.product((0, 1), repeat=4)]
    out = gcd_soft_output(HAMMING, pats, rx)
    book, post = exact_posteriors(HAMMING, rx.llr)
    assert sum(p for _, p in out.block_posteriors) == pytest.approx(1.0)
    for c, p in out.block_posteriors:
        assert p == pytest.approx(lookup(book, post, c), abs=1e-9)
    one = gcd_soft_output(HAMMING, pats, rx, L=1, weighting="info")
    rel = rx.reliabilities
    p_i = math.exp(pattern_log_probability_offset(rel[:4]))
    ratio = (2**4 - 1) / (2**7 - 1)
    assert one.block_posteriors[0][1] == pytest.approx(p_i / (p_i + (1 - p_i) * ratio))


def test_bit_llrs_follow_posteriors():
    _, rx = next(noisy_words(HAMMING, 3.0, 1, seed=8))
    res = grand(HAMMING, rx, list_size=None, soft_output=True)
    book, post = exact_posteriors(HAMMING, rx.llr)
    p1 = post @ book
    assert res.soft.bit_llrs == pytest.approx(np.log(1 - p1) - np.log(p1), rel=1e-9)


def test_single_unreliable_flip_is_corrected():
    res = grand(HAMMING, received_from_llr([-1.0, 2, 2, 2, 2, 2, 2]))
    assert res.found and res.queries_used == 2
    assert not res.codeword.any()
