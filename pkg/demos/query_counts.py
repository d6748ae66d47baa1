"""Saddle-point query counts against simulated GRAND and GCD on [32,26] and [32,10]."""

import numpy as np

from guessdec import awgn, gcd, grand, random_linear_code, simulate_transmission
from guessdec.analysis import log_query_counts
from guessdec.channels import trial_rng

TRIALS = 3000

for n, k, snr, name, mode in ((32, 26, 5.5, "grand", "grand"), (32, 10, 2.75, "gcd", "gcd_trivial")):
    code = random_linear_code(n, k, seed=11)
    queries, llrs, teps = [], [], []
    for i in range(TRIALS):
        rng = trial_rng(1, i)
        c = code.encode(rng.integers(0, 2, k, dtype=np.uint8))
        rx = simulate_transmission(awgn(snr, code.rate), c, rng)
        res = grand(code, rx) if name == "grand" else gcd(code, rx, stop="trivial")
        queries.append(res.queries_used)
        llrs.append(rx.llr)
        teps.append(rx.z ^ c)
    est = np.exp(log_query_counts(mode, np.array(llrs), np.array(teps), n, k))
    print(f"[{n},{k}] {name} at {snr} dB: simulated {np.mean(queries):.3f}, "
          f"saddle point {est.mean():.3f}")
