"""Exact BSC list sizes at n=128, k=105 against the saddle-point estimate."""

import math

import numpy as np

from guessdec import TailQuery, bsc_exact_counts, saddlepoint_tail

n, k, p = 128, 105, 0.01
llr = math.log((1 - p) / p)
print(f"{'w':>3} {'GRAND exact':>12} {'estimate':>12} {'err':>7}   "
      f"{'GCD exact':>12} {'estimate':>12} {'err':>7}")
for w in (1, 2, 4, 8):
    exact = bsc_exact_counts(n, k, w)
    cells = []
    for m, count in zip((n, k), exact):
        est = 2.0**m * saddlepoint_tail(TailQuery(np.full(m, llr), w * llr))
        cells.append(f"{count:12.4g} {est:12.4g} {100 * (est / count - 1):+6.2f}%")
    print(f"{w:3d} " + "   ".join(cells))
