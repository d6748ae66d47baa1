"""Command-line entry point: ``guessdec simulate|analyze|rcu|decode``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analysis
from .channels import ChannelSpec, received_from_llr
from .decoders import StopRule, gcd, grand
from .errors import GuessDecError
from .harness import (AnalysisConfig, SimConfig, emit_report, load_code_source, run_analysis,
                      run_simulation)
from .patterns import ORDERS


def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def parse_channel(text):
    """``awgn:ebn0[,ebn0...][,rate=R]`` or ``bsc:p[,p...]`` -> (kind, points, rate or None)."""
    kind, _, rest = text.partition(":")
    if kind not in ("awgn", "bsc") or not rest:
        raise argparse.ArgumentTypeError(f"expected awgn:... or bsc:..., got {text!r}")
    rate = None
    points = []
    try:
        for tok in rest.split(","):
            tok = tok.strip()
            if tok.startswith("rate="):
                rate = float(tok[5:])
            elif tok:
                points.append(float(tok))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number in channel {text!r}") from None
    if not points:
        raise argparse.ArgumentTypeError(f"no operating points in {text!r}")
    if rate is not None and kind == "bsc":
        raise argparse.ArgumentTypeError("rate= applies to awgn only")
    return kind, points, rate


def _add_decoder_args(p):
    p.add_argument("--decoder", choices=("grand", "gcd"), default="grand")
    p.add_argument("--order", choices=ORDERS, default="soft")
    p.add_argument("--stop", choices=("membership", "trivial", "dai", "budget"), default=None,
                   help="default: membership for grand, trivial for gcd")
    p.add_argument("--lmax", type=int, default=None, help="query budget (default: unlimited)")


def build_parser():
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="guessdec", formatter_class=fmt,
                                     description="Guessing decoders for binary linear codes.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", formatter_class=fmt, help="Monte-Carlo FER and query counts")
    sim.add_argument("--code", required=True, help="parity-check file or random:n,k,seed")
    sim.add_argument("--channel", required=True, type=parse_channel,
                     help="awgn:ebn0_list[,rate=R] or bsc:p_list")
    _add_decoder_args(sim)
    sim.add_argument("--min-errors", type=int, default=100)
    sim.add_argument("--max-frames", type=int, default=10**6)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--out", default="-")
    sim.add_argument("--format", choices=("csv", "json"), default="csv")

    ana = sub.add_parser("analyze", formatter_class=fmt,
                         help="saddle-point query counts, budgets and ops across rates")
    ana.add_argument("--n", type=int, required=True)
    ana.add_argument("--rates", type=_floats, required=True, help="comma-separated code rates")
    ana.add_argument("--mode", choices=("grand", "gcd_trivial", "gcd_dai"), default="grand")
    ana.add_argument("--epsilon", type=float, default=1e-5, help="target error probability")
    ana.add_argument("--alpha", type=float, default=1.0)
    ana.add_argument("--samples", type=int, default=10**5)
    ana.add_argument("--ebn0", type=float, default=None,
                     help="fixed Eb/N0 in dB (default: where the RCU bound meets --epsilon)")
    ana.add_argument("--rcu-samples", type=int, default=4000)
    ana.add_argument("--seed", type=int, default=0)
    ana.add_argument("--out", default="-")
    ana.add_argument("--format", choices=("csv", "json"), default="csv")

    rcu = sub.add_parser("rcu", formatter_class=fmt, help="Monte-Carlo RCU bound")
    rcu.add_argument("--n", type=int, required=True)
    rcu.add_argument("--k", type=int, required=True)
    rcu.add_argument("--channel", required=True, type=parse_channel,
                     help="awgn:ebn0_list[,rate=R] or bsc:p_list (rate defaults to k/n)")
    rcu.add_argument("--samples", type=int, default=10**4)
    rcu.add_argument("--seed", type=int, default=0)
    rcu.add_argument("--out", default="-")
    rcu.add_argument("--format", choices=("csv", "json"), default="csv")

    dec = sub.add_parser("decode", formatter_class=fmt, help="decode one received LLR vector")
    dec.add_argument("--code", required=True, help="parity-check file or random:n,k,seed")
    dec.add_argument("--llr", required=True, type=_floats,
                     help="comma-separated LLRs (use --llr=-1.2,... if the first is negative)")
    _add_decoder_args(dec)
    dec.add_argument("--soft-output", action="store_true", help="also report bit LLRs")
    return parser


def _simulate(args):
    kind, points, _ = args.channel
    config = SimConfig(code=load_code_source(args.code), channel=kind, points=tuple(points),
                       decoder=args.decoder, order=args.order, stop=args.stop, l_max=args.lmax,
                       min_errors=args.min_errors, max_frames=args.max_frames, seed=args.seed,
                       workers=args.workers)
    emit_report(run_simulation(config), args.format, args.out)


def _analyze(args):
    config = AnalysisConfig(n=args.n, rates=tuple(args.rates), mode=args.mode,
                            epsilon_target=args.epsilon, alpha=args.alpha, samples=args.samples,
                            ebn0_db=args.ebn0, rcu_samples=args.rcu_samples, seed=args.seed)
    rows = run_analysis(config)
    emit_report(rows, args.format, args.out)


def _rcu(args):
    kind, points, rate = args.channel
    rows = []
    for i, pt in enumerate(points):
        if kind == "awgn":
            spec = ChannelSpec("awgn", ebn0_db=pt, rate=rate if rate is not None else args.k / args.n)
        else:
            spec = ChannelSpec("bsc", p=pt)
        rng = np.random.default_rng([args.seed, i])
        rows.append({"point": pt, "samples": args.samples,
                     "rcu": analysis.rcu_bound(args.n, args.k, spec, args.samples, rng)})
    emit_report(rows, args.format, args.out, columns=("point", "samples", "rcu"))


def _decode(args):
    code = load_code_source(args.code)
    rx = received_from_llr(args.llr)
    soft = args.soft_output
    if args.decoder == "grand":
        stop = args.stop or "membership"
        if stop != "membership":
            raise GuessDecError(f"stop rule {stop!r} does not apply to grand")
        res = grand(code, rx, order=args.order, l_max=args.lmax, soft_output=soft,
                    list_size=None if soft else 1)
    else:
        res = gcd(code, rx, order=args.order, l_max=args.lmax,
                  stop=StopRule(args.stop or "trivial"), soft_output=soft)
    out = {"codeword": "".join(map(str, res.codeword)), "found": res.found,
           "queries_used": res.queries_used, "tep_soft_weight": res.tep_soft_weight,
           "ml_certified": res.ml_certified, "budget_exhausted": res.budget_exhausted}
    if res.soft is not None:
        out["bit_llrs"] = [float(x) for x in res.soft.bit_llrs]
        out["residual"] = res.soft.residual
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")


COMMANDS = {"simulate": _simulate, "analyze": _analyze, "rcu": _rcu, "decode": _decode}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (GuessDecError, OSError, ValueError) as exc:
        print(f"guessdec: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
