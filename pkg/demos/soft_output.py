"""Block posteriors from GRAND and GCD next to the exact codebook posteriors."""

from pathlib import Path

import numpy as np

from guessdec import awgn, gcd, grand, load_code, simulate_transmission

code = load_code(Path(__file__).parent.parent / "tests" / "data" / "hamming74.txt")
book = code._codebook
rng = np.random.default_rng(4)
c = code.encode(rng.integers(0, 2, code.k, dtype=np.uint8))
rx = simulate_transmission(awgn(0.0, code.rate), c, rng)

logp = -np.logaddexp(0.0, -(1 - 2 * book.astype(int)) * rx.llr).sum(axis=1)
exact = np.exp(logp - logp.max())
exact /= exact.sum()

full = grand(code, rx, list_size=None, soft_output=True)
short = gcd(code, rx, stop="budget", soft_output=True, list_size=4)
for name, res in (("GRAND full sweep", full), ("GCD, 4 codewords", short)):
    print(f"{name}: residual {res.soft.residual:.3e}")
    for cw, p in res.soft.block_posteriors[:4]:
        j = np.flatnonzero((book == cw).all(axis=1))[0]
        print(f"  {''.join(map(str, cw))}  estimate {p:.6f}  exact {exact[j]:.6f}")
    print("  bit LLRs", np.round(res.soft.bit_llrs, 3))
