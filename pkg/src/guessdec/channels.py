"""BPSK-AWGN and BSC channel simulation producing LLRs and hard decisions.

AWGN noise uses numpy's ``Generator.standard_normal`` (ziggurat sampler), so a
fixed seed yields bit-identical output on a given numpy version.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .gf2core import as_bits


@dataclass(frozen=True)
class ChannelSpec:
    kind: str
    ebn0_db: float | None = None
    rate: float | None = None
    p: float | None = None

    def __post_init__(self):
        if self.kind == "awgn":
            if self.ebn0_db is None or self.rate is None:
                raise InputError("awgn channel needs ebn0_db and rate")
            if not 0 < self.rate < 1:
                raise InputError(f"code rate must lie in (0, 1), got {self.rate}")
        elif self.kind == "bsc":
            if self.p is None or not 0 < self.p < 0.5:
                raise InputError(f"crossover probability must lie in (0, 0.5), got {self.p}")
        else:
            raise InputError(f"unknown channel kind {self.kind!r}")

    @property
    def sigma2(self):
        """Noise variance per real dimension for unit-energy BPSK."""
        if self.kind != "awgn":
            raise InputError("sigma2 is defined for awgn only")
        return 1.0 / (2.0 * self.rate * 10.0 ** (self.ebn0_db / 10.0))

    @property
    def bsc_llr(self):
        return math.log((1.0 - self.p) / self.p)

    def label(self):
        return self.ebn0_db if self.kind == "awgn" else self.p


def awgn(ebn0_db, rate):
    return ChannelSpec("awgn", ebn0_db=float(ebn0_db), rate=float(rate))


def bsc(p):
    return ChannelSpec("bsc", p=float(p))


@dataclass(frozen=True, eq=False)
class ReceivedWord:
    llr: np.ndarray

    @property
    def z(self):
        return (self.llr < 0).astype(np.uint8)

    @property
    def reliabilities(self):
        return np.abs(self.llr)

    @property
    def n(self):
        return self.llr.shape[0]


def received_from_llr(llr):
    llr = np.asarray(llr, dtype=float)
    if llr.ndim != 1:
        raise InputError("llr must be one-dimensional")
    return ReceivedWord(llr.copy())


def simulate_transmission(spec, codeword, rng):
    """Send ``codeword`` through the channel and return the received LLRs.

    AWGN: bit 0 -> +1, bit 1 -> -1, noise variance from ``spec.sigma2`` and
    ``llr = 2 y / sigma2``. BSC: each bit flips with probability ``p`` and
    the LLR magnitude is ``ln((1-p)/p)``.
    """
    c = as_bits(codeword, name="codeword")
    if spec.kind == "awgn":
        sigma2 = spec.sigma2
        y = 1.0 - 2.0 * c + math.sqrt(sigma2) * rng.standard_normal(c.shape[0])
        llr = 2.0 * y / sigma2
    else:
        flips = rng.random(c.shape[0]) < spec.p
        received = c ^ flips.astype(np.uint8)
        llr = np.where(received == 0, 1.0, -1.0) * spec.bsc_llr
    return ReceivedWord(llr)


def true_tep(codeword, received):
    c = as_bits(codeword, received.n, "codeword")
    return received.z ^ c


def trial_rng(seed, index):
    """Independent generator for trial ``index`` under master ``seed``."""
    return np.random.default_rng([int(seed), int(index)])
