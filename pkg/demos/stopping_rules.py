"""GCD with the trivial and DAI stopping rules on a [32,10] code at 3 dB."""

import numpy as np

from guessdec import SimConfig, random_linear_code, run_simulation

code = random_linear_code(32, 10, seed=11)
for stop in ("trivial", "dai"):
    cfg = SimConfig(code=code, channel="awgn", points=(2.0, 3.0), decoder="gcd", stop=stop,
                    min_errors=50, max_frames=20000, seed=6)
    for row in run_simulation(cfg):
        print(f"{stop:8s} {row.point:4.1f} dB  frames {row.frames:6d}  FER {row.fer:.3e}  "
              f"avg queries {row.avg_queries:8.1f}  q99 {row.q99:8.0f}")
