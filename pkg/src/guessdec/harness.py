"""Monte-Carlo decoding simulations, analysis sweeps and report writing.

Trials are seeded individually from ``(seed, point_index, trial_index)`` and
decoded in fixed-size chunks. Chunks may run in a process pool, but results
are consumed in trial order and the stopping rule (frame-error target or
frame cap) is applied trial by trial, so every reported number except wall
time is independent of the worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import analysis
from .channels import ChannelSpec, simulate_transmission
from .decoders import StopRule, gcd, grand
from .errors import InputError
from .gf2core import LinearCode, load_code, random_linear_code
from .patterns import ORDERS

CHUNK = 256
DEFAULT_STOP = {"grand": "membership", "gcd": "trivial"}


@dataclass(frozen=True)
class SimConfig:
    code: LinearCode
    channel: str
    points: tuple
    decoder: str = "grand"
    order: str = "soft"
    stop: str | None = None
    l_max: int | None = None
    min_errors: int = 100
    max_frames: int = 10**6
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.decoder not in DEFAULT_STOP:
            raise InputError(f"unknown decoder {self.decoder!r}")
        if self.order not in ORDERS:
            raise InputError(f"unknown order {self.order!r}")
        if self.stop is None:
            object.__setattr__(self, "stop", DEFAULT_STOP[self.decoder])
        StopRule(self.stop)
        if (self.decoder == "grand") != (self.stop == "membership"):
            raise InputError(f"stop rule {self.stop!r} does not apply to {self.decoder}")
        if self.channel not in ("awgn", "bsc"):
            raise InputError(f"unknown channel {self.channel!r}")
        if not self.points:
            raise InputError("operating-point grid is empty")
        if self.min_errors < 1 or self.max_frames < 1 or self.workers < 1:
            raise InputError("min_errors, max_frames and workers must be >= 1")
        for pt in self.points:
            self.channel_spec(pt)

    def channel_spec(self, point):
        if self.channel == "awgn":
            return ChannelSpec("awgn", ebn0_db=float(point), rate=self.code.rate)
        return ChannelSpec("bsc", p=float(point))


@dataclass(frozen=True)
class ReportRow:
    point: float
    frames: int
    frame_errors: int
    budget_exhausted: int
    fer: float
    avg_queries: float
    q50: float
    q90: float
    q99: float
    avg_ops: float
    seconds: float


REPORT_FIELDS = tuple(f.name for f in fields(ReportRow))


def load_code_source(source):
    """A code from a file path or ``random:n,k,seed``; ``.alist`` files use the alist format."""
    if source.startswith("random:"):
        try:
            n, k, seed = (int(x) for x in source[len("random:"):].split(","))
        except ValueError:
            raise InputError(f"expected random:n,k,seed, got {source!r}") from None
        return random_linear_code(n, k, seed)
    fmt = "alist" if source.endswith(".alist") else "dense-text"
    return load_code(source, format=fmt)


def _decode_trials(config, point_index, start, stop):
    """Decode trials ``start..stop-1``; returns rows of (error, exhausted, queries)."""
    code = config.code
    spec = config.channel_spec(config.points[point_index])
    out = np.zeros((stop - start, 3), dtype=np.int64)
    for row, t in enumerate(range(start, stop)):
        rng = np.random.default_rng([config.seed, point_index, t])
        msg = rng.integers(0, 2, code.k, dtype=np.uint8)
        cw = code.encode(msg)
        rx = simulate_transmission(spec, cw, rng)
        if config.decoder == "grand":
            res = grand(code, rx, order=config.order, l_max=config.l_max)
        else:
            res = gcd(code, rx, order=config.order, l_max=config.l_max, stop=StopRule(config.stop))
        out[row] = (not np.array_equal(res.codeword, cw), res.budget_exhausted, res.queries_used)
    return out


def _chunks(config, point_index, pool):
    """Yield per-chunk result arrays in trial order."""
    starts = range(0, config.max_frames, CHUNK)
    if pool is None:
        for s in starts:
            yield _decode_trials(config, point_index, s, min(s + CHUNK, config.max_frames))
        return
    window = []
    it = iter(starts)
    for s in it:
        window.append(pool.submit(_decode_trials, config, point_index, s,
                                  min(s + CHUNK, config.max_frames)))
        if len(window) >= 2 * config.workers:
            break
    while window:
        done = window.pop(0).result()
        nxt = next(it, None)
        if nxt is not None:
            window.append(pool.submit(_decode_trials, config, point_index, nxt,
                                      min(nxt + CHUNK, config.max_frames)))
        yield done


def _run_point(config, point_index, pool):
    t0 = time.perf_counter()
    parts = []
    errors = 0
    gen = _chunks(config, point_index, pool)
    for block in gen:
        cum = errors + np.cumsum(block[:, 0])
        hit = np.flatnonzero(cum >= config.min_errors)
        if hit.size:
            parts.append(block[: hit[0] + 1])
            gen.close()
            break
        parts.append(block)
        errors = int(cum[-1])
    res = np.concatenate(parts)
    queries = res[:, 2].astype(float)
    frames = res.shape[0]
    errs = int(res[:, 0].sum())
    avg_q = float(queries.mean())
    q50, q90, q99 = (float(x) for x in np.percentile(queries, [50, 90, 99]))
    return ReportRow(
        point=float(config.points[point_index]), frames=frames, frame_errors=errs,
        budget_exhausted=int(res[:, 1].sum()), fer=errs / frames, avg_queries=avg_q,
        q50=q50, q90=q90, q99=q99,
        avg_ops=analysis.ops_model(config.decoder, avg_q, config.code.n, config.code.k),
        seconds=time.perf_counter() - t0)


def run_simulation(config):
    """Simulate every operating point of ``config`` and return one row each."""
    if config.workers == 1:
        return [_run_point(config, i, None) for i in range(len(config.points))]
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        return [_run_point(config, i, pool) for i in range(len(config.points))]


@dataclass(frozen=True)
class AnalysisConfig:
    """Saddle-point sweep over code rates at fixed length ``n``.

    Each rate ``r`` uses ``k = round(r n)``. The operating point is
    ``ebn0_db`` when given, otherwise the Eb/N0 at which the Monte-Carlo RCU
    bound equals ``epsilon_target`` (found with ``rcu_samples`` draws).
    """

    n: int
    rates: tuple
    mode: str = "grand"
    epsilon_target: float = 1e-5
    alpha: float = 1.0
    samples: int = 10**5
    ebn0_db: float | None = None
    rcu_samples: int = 4000
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("grand", "gcd_trivial", "gcd_dai"):
            raise InputError(f"analysis mode must be grand, gcd_trivial or gcd_dai, got {self.mode!r}")
        if not self.rates:
            raise InputError("rate grid is empty")
        if self.samples < 1:
            raise InputError("samples must be >= 1")
        for r in self.rates:
            k = round(r * self.n)
            if not 1 <= k < self.n:
                raise InputError(f"rate {r} gives k={k} outside 1..{self.n - 1}")


@dataclass(frozen=True)
class AnalysisRow:
    rate: float
    n: int
    k: int
    ebn0_db: float
    epsilon_target: float
    samples: int
    avg_queries: float
    lower_bound: float
    l_tilde_max: int
    avg_ops: float
    lower_bound_ops: float


def run_analysis(config):
    """Per-rate saddle-point averages, GRAND lower bound, minimum budget and ops."""
    decoder = "grand" if config.mode == "grand" else "gcd"
    rows = []
    for i, rate in enumerate(config.rates):
        n = config.n
        k = round(rate * n)
        if config.ebn0_db is None:
            snr = analysis.snr_for_rcu(n, k, config.epsilon_target, config.rcu_samples,
                                       seed=[config.seed, i, 1])
        else:
            snr = float(config.ebn0_db)
        rng = np.random.default_rng([config.seed, i, 0])
        spec = ChannelSpec("awgn", ebn0_db=snr, rate=k / n)
        est = []
        for s in range(0, config.samples, 4096):
            b = min(4096, config.samples - s)
            llrs = analysis.sample_zero_codeword_llrs(spec, n, b, rng)
            est.append(np.exp(analysis.log_query_counts(config.mode, llrs, llrs < 0, n, k)))
        est = np.concatenate(est)
        budget = analysis.min_required_budget(est, config.alpha, config.epsilon_target)
        avg = float(est.mean())
        lb = analysis.grand_query_lower_bound(n, k, config.epsilon_target)
        rows.append(AnalysisRow(
            rate=float(rate), n=n, k=k, ebn0_db=float(snr), epsilon_target=config.epsilon_target,
            samples=config.samples, avg_queries=avg, lower_bound=lb,
            l_tilde_max=budget.l_tilde_max, avg_ops=analysis.ops_model(decoder, avg, n, k),
            lower_bound_ops=analysis.ops_model("grand", lb, n, k)))
    return rows


def _as_dict(row):
    return dict(row) if isinstance(row, dict) else asdict(row)


def emit_report(rows, format="csv", path=None, columns=REPORT_FIELDS):
    """Write rows as CSV (fixed header) or a JSON array; ``path`` None or ``-`` means stdout.

    ``columns`` sets the CSV header when ``rows`` is empty; otherwise it
    follows the first row's fields.
    """
    if format not in ("csv", "json"):
        raise InputError(f"unknown report format {format!r}")
    dicts = [_as_dict(r) for r in rows]
    if format == "json":
        text = json.dumps(dicts, indent=2) + "\n"
    else:
        header = list(dicts[0]) if dicts else list(columns)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
        writer.writeheader()
        for d in dicts:
            writer.writerow({key: repr(v) if isinstance(v, float) and math.isfinite(v) else v
                             for key, v in d.items()})
        text = buf.getvalue()
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
