"""Decode one noisy [7,4] Hamming word with GRAND and GCD and compare to brute force."""

from pathlib import Path

import numpy as np

from guessdec import awgn, brute_force_mld, gcd, grand, load_code, simulate_transmission

code = load_code(Path(__file__).parent.parent / "tests" / "data" / "hamming74.txt")
rng = np.random.default_rng(2)
msg = rng.integers(0, 2, code.k, dtype=np.uint8)
c = code.encode(msg)
rx = simulate_transmission(awgn(1.0, code.rate), c, rng)

print("sent     ", c)
print("hard dec ", rx.z)
print("llr      ", np.round(rx.llr, 2))

ml, w_ml = brute_force_mld(code, rx.llr)
print(f"\nbrute-force ML {ml}  soft weight {w_ml:.3f}")
for name, res in (("GRAND", grand(code, rx)),
                  ("GCD trivial", gcd(code, rx, stop="trivial")),
                  ("GCD DAI", gcd(code, rx, stop="dai"))):
    print(f"{name:12s} {res.codeword}  weight {res.tep_soft_weight:.3f}  "
          f"queries {res.queries_used}  certified {res.ml_certified}")
