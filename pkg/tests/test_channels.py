import math

import numpy as np
import pytest

from guessdec.channels import (ChannelSpec, awgn, bsc, received_from_llr, simulate_transmission,
                               trial_rng, true_tep)
from guessdec.errors import InputError


def test_awgn_noise_variance():
    spec = awgn(0.0, 0.5)
    assert spec.sigma2 == pytest.approx(1.0)
    assert awgn(3.0, 0.5).sigma2 == pytest.approx(10 ** -0.3)


def test_awgn_llr_statistics():
    spec = awgn(2.0, 0.5)
    rx = simulate_transmission(spec, np.zeros(200000, dtype=np.uint8), np.random.default_rng(0))
    # llr = 2y/sigma2 with y ~ N(1, sigma2): mean 2/sigma2, variance 4/sigma2
    assert rx.llr.mean() == pytest.approx(2 / spec.sigma2, rel=0.01)
    assert rx.llr.var() == pytest.approx(4 / spec.sigma2, rel=0.02)


def test_bsc_flips_at_rate_p():
    spec = bsc(0.1)
    c = np.ones(100000, dtype=np.uint8)
    rx = simulate_transmission(spec, c, np.random.default_rng(1))
    assert np.abs(rx.llr) == pytest.approx(np.full(c.size, math.log(9.0)))
    assert true_tep(c, rx).mean() == pytest.approx(0.1, abs=0.005)


def test_transmission_is_deterministic_per_seed():
    c = np.array([0, 1, 1, 0, 1, 0, 0], dtype=np.uint8)
    a = simulate_transmission(awgn(1.0, 4 / 7), c, trial_rng(3, 9)).llr
    b = simulate_transmission(awgn(1.0, 4 / 7), c, trial_rng(3, 9)).llr
    other = simulate_transmission(awgn(1.0, 4 / 7), c, trial_rng(3, 10)).llr
    assert np.array_equal(a, b)
    assert not np.array_equal(a, other)


def test_hard_decision_and_reliabilities():
    rx = received_from_llr([1.5, -0.2, 0.0, -3.0])
    assert rx.z.tolist() == [0, 1, 0, 1]
    assert rx.reliabilities.tolist() == [1.5, 0.2, 0.0, 3.0]


@pytest.mark.parametrize("kwargs", [
    dict(kind="awgn", ebn0_db=1.0),
    dict(kind="awgn", ebn0_db=1.0, rate=1.0),
    dict(kind="bsc", p=0.5),
    dict(kind="bsc"),
    dict(kind="rayleigh"),
])
def test_invalid_channels(kwargs):
    with pytest.raises(InputError):
        ChannelSpec(**kwargs)
