"""RCU bound against simulated SGRAND on a random [128,106] code.

Slow: full soft GRAND in Python needs many minutes per point near FER 1e-2.
Use --frames and --points to trade accuracy for time.
"""

import argparse

import numpy as np

from guessdec import SimConfig, awgn, random_linear_code, rcu_bound, run_simulation

parser = argparse.ArgumentParser()
parser.add_argument("--n", type=int, default=128)
parser.add_argument("--k", type=int, default=106)
parser.add_argument("--points", default="3.5,4.0,4.5")
parser.add_argument("--frames", type=int, default=2000)
parser.add_argument("--min-errors", type=int, default=50)
parser.add_argument("--workers", type=int, default=4)
parser.add_argument("--rcu-samples", type=int, default=20000)
args = parser.parse_args()

points = tuple(float(x) for x in args.points.split(","))
code = random_linear_code(args.n, args.k, seed=0)
cfg = SimConfig(code=code, channel="awgn", points=points, min_errors=args.min_errors,
                max_frames=args.frames, workers=args.workers, seed=1)
for i, row in enumerate(run_simulation(cfg)):
    rcu = rcu_bound(args.n, args.k, awgn(row.point, code.rate), args.rcu_samples,
                    np.random.default_rng(i))
    print(f"{row.point:4.1f} dB  SGRAND FER {row.fer:.3e} ({row.frame_errors}/{row.frames})  "
          f"RCU {rcu:.3e}  avg queries {row.avg_queries:.1f}")
