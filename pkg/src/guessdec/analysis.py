"""Query-count and error-probability analysis for guessing decoders.

The central quantity is the lower tail ``P[sum_i f_i w_i <= t]`` of a sum of
independent two-point variables (``f_i`` uniform on {0, 1}), approximated by
exponential tilting. With cumulant generating function
``K(s) = sum_i log((1 + exp(s w_i)) / 2)`` and saddle point ``K'(s) = t``
(``s < 0`` in the lower tail), the continuous form is

    P ~ 1/2 exp(K(s) - s t + s^2 K''(s) / 2) erfc(-s sqrt(K''(s) / 2))

and when all positive weights are integer multiples of a span ``h`` the
Gaussian integral is replaced by the matching lattice sum

    P ~ exp(K(s) - s t) h / sqrt(2 pi K''(s)) sum_{j>=0} exp(s j h - (j h)^2 / (2 K''(s))).

Equal weights (a binary symmetric channel) are the common lattice case, where
the continuous form misplaces the probability atom sitting exactly at ``t``.
All work is done in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx, expit

from .channels import ChannelSpec
from .decoders import dai_tau
from .errors import InputError, ResolutionError

LN2 = math.log(2.0)
MODES = ("grand", "gcd_trivial", "gcd_dai", "grand_rank", "gcd_rank")
_S_LOWER = -50.0
_S_TOL = 1e-10
_LATTICE_RTOL = 1e-9
_LATTICE_MAX_RATIO = 1e6


@dataclass(frozen=True)
class TailQuery:
    weights: np.ndarray
    threshold: float


@dataclass(frozen=True)
class QuerySample:
    lambda_id: int
    estimate: float
    log_estimate: float


@dataclass(frozen=True)
class BudgetReport:
    l_tilde_max: int
    alpha: float
    epsilon_target: float
    tail_at_budget: float


def _lattice_span(w):
    """Common span of positive weights, or 0.0 when they are not commensurate."""
    if w.size == 0:
        return 0.0
    h = w.min()
    ratio = w / h
    if ratio.max() > _LATTICE_MAX_RATIO:
        return 0.0
    if np.all(np.abs(ratio - np.round(ratio)) <= _LATTICE_RTOL * ratio):
        return float(h)
    return 0.0


def _cgf(w, s):
    x = s[:, None] * w
    k0 = (np.logaddexp(0.0, x) - LN2).sum(axis=1)
    p = np.exp(-np.logaddexp(0.0, -x))
    k1 = (w * p).sum(axis=1)
    k2 = (w * w * p * (1.0 - p)).sum(axis=1)
    return k0, k1, k2


def _cgf_slope(w, s):
    return (w * expit(s[:, None] * w)).sum(axis=1)


def _solve_saddle(w, t):
    """Bisection for ``K'(s) = t`` with ``s <= 0``, one root per row."""
    lo = np.full(t.shape, _S_LOWER)
    hi = np.zeros(t.shape)
    for _ in range(60):
        k1 = _cgf_slope(w, lo)
        low_enough = k1 <= t
        if low_enough.all():
            break
        lo = np.where(low_enough, lo, 2.0 * lo)
    while np.max(hi - lo) > _S_TOL:
        mid = 0.5 * (lo + hi)
        k1 = _cgf_slope(w, mid)
        above = k1 > t
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return 0.5 * (lo + hi)


def _log_lower_tail_core(w, t, h):
    """Saddle-point log P[S <= t] for rows with ``0 < t <= mean``."""
    s = _solve_saddle(w, t)
    k0, _, v = _cgf(w, s)
    base = k0 - s * t
    out = np.empty_like(t)
    cont = h == 0.0
    if cont.any():
        sc, vc = s[cont], v[cont]
        out[cont] = base[cont] + np.log(0.5 * erfcx(-sc * np.sqrt(vc / 2.0)))
    for i in np.flatnonzero(~cont):
        hi, si, vi = h[i], s[i], v[i]
        jmax = int(math.ceil(max(40.0 / max(-si * hi, 1e-12), math.sqrt(80.0 * vi) / hi))) + 1
        j = np.arange(min(jmax, 100000)) * hi
        terms = si * j - j * j / (2.0 * vi)
        lse = float(np.logaddexp.reduce(terms))
        out[i] = base[i] + math.log(hi) - 0.5 * math.log(2.0 * math.pi * vi) + lse
    return out


def log_tail_batch(weights, thresholds):
    """Vectorised ``log P[sum f_i w_i <= t]`` for a batch of weight rows.

    ``weights`` has shape ``(B, m)`` (or ``(m,)``), ``thresholds`` shape
    ``(B,)`` (or scalar). Zero weights are allowed and never affect the event.
    """
    w_all = np.atleast_2d(np.asarray(weights, dtype=float))
    t_all = np.atleast_1d(np.asarray(thresholds, dtype=float)).astype(float)
    if t_all.shape[0] != w_all.shape[0]:
        raise InputError("one threshold per weight row is required")
    if (w_all < 0).any() or not np.isfinite(w_all).all():
        raise InputError("weights must be finite and nonnegative")
    out = np.empty(w_all.shape[0])
    # group rows by their count of positive weights so each group is rectangular
    pos_counts = (w_all > 0).sum(axis=1)
    for m_pos in np.unique(pos_counts):
        rows = np.flatnonzero(pos_counts == m_pos)
        if m_pos == 0:
            out[rows] = np.where(t_all[rows] >= 0, 0.0, -np.inf)
            continue
        w = np.sort(w_all[rows], axis=1)[:, -m_pos:]
        out[rows] = _log_tail_rows(w, t_all[rows], int(m_pos))
    return out


def _log_tail_rows(w, t, m_pos):
    total = w.sum(axis=1)
    h = np.array([_lattice_span(row) for row in w])
    lattice = h > 0
    t = t.copy()
    t[lattice] = h[lattice] * np.floor(t[lattice] / h[lattice] + _LATTICE_RTOL)
    out = np.full(t.shape, np.nan)
    out[t < 0] = -np.inf
    out[t >= total] = 0.0
    todo = np.isnan(out)
    # only the empty pattern fits under the smallest weight
    tiny = todo & (t < w[:, 0])
    out[tiny] = -m_pos * LN2
    todo &= ~tiny
    upper = todo & (t > total / 2.0)
    lower = todo & ~upper
    if lower.any():
        # here 0 <= t < total, so the empty pattern is in and the full one is out
        floor = -m_pos * LN2
        out[lower] = np.clip(_log_lower_tail_core(w[lower], t[lower], h[lower]),
                             floor, np.log1p(-math.exp(floor)))
    if upper.any():
        # S and total - S share a distribution: P[S <= t] = 1 - P[S <= total - t - gap]
        gap = np.where(lattice[upper], h[upper], 0.0)
        comp = _log_tail_rows(w[upper], total[upper] - t[upper] - gap, m_pos)
        out[upper] = np.log1p(-np.minimum(np.exp(comp), 1.0))
    return out


def log_saddlepoint_tail(q):
    return float(log_tail_batch(q.weights, [q.threshold])[0])


def saddlepoint_tail(q):
    """Approximate ``P[sum f_i w_i <= t]`` for uniform independent bits ``f_i``."""
    return math.exp(log_saddlepoint_tail(q))


def exact_tail(weights, threshold):
    """Exhaustive ``P[sum f_i w_i <= t]`` over all ``2^m`` patterns (m <= 22)."""
    w = np.asarray(weights, dtype=float)
    m = w.size
    if m > 22:
        raise InputError("exhaustive tail limited to m <= 22")
    sums = np.zeros(1)
    for x in w:
        sums = np.concatenate([sums, sums + x])
    return float(np.count_nonzero(sums <= threshold + 1e-12 * max(1.0, abs(threshold)))) / (1 << m)


def _mode_inputs(mode, rel, e, k):
    gs = (rel * e).sum(axis=1)
    if mode in ("grand", "grand_rank"):
        return rel, gs, rel.shape[1]
    info = rel[:, :k]
    if mode == "gcd_trivial":
        return info, gs, k
    if mode == "gcd_dai":
        tau = np.array([dai_tau(row[k:]) for row in rel])
        return info, gs - tau, k
    if mode == "gcd_rank":
        return info, (info * e[:, :k]).sum(axis=1), k
    raise InputError(f"unknown mode {mode!r}; choose from {MODES}")


def log_query_counts(mode, llrs, teps, n, k):
    """Vectorised log of the estimated list size for each row of ``llrs``.

    ``grand``/``grand_rank``: ``2^n P[Gs(f) <= Gs(e)]`` over all ``n`` bits.
    ``gcd_trivial``: ``2^k P[Gs(f_I) <= Gs(e)]`` over the first ``k`` bits.
    ``gcd_dai``: as ``gcd_trivial`` with the threshold lowered by ``tau``.
    ``gcd_rank``: ``2^k P[Gs(f_I) <= Gs(e_I)]``.
    """
    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}; choose from {MODES}")
    rel = np.abs(np.atleast_2d(np.asarray(llrs, dtype=float)))
    e = np.atleast_2d(np.asarray(teps)).astype(float)
    if rel.shape != e.shape or rel.shape[1] != n or not 1 <= k < n:
        raise InputError(f"inconsistent shapes {rel.shape}, {e.shape} for n={n}, k={k}")
    w, t, span = _mode_inputs(mode, rel, e, k)
    return span * LN2 + log_tail_batch(w, t)


def estimate_query_count(mode, llr, true_tep, n, k, lambda_id=0):
    log_est = float(log_query_counts(mode, [llr], [true_tep], n, k)[0])
    return QuerySample(lambda_id=lambda_id, estimate=math.exp(log_est), log_estimate=log_est)


def bsc_exact_counts(n, k, w):
    """Exact list sizes ``(sum_{j<=w} C(n, j), sum_{j<=w} C(k, j))`` for a BSC."""
    if not 0 <= w <= n:
        raise InputError(f"weight {w} outside 0..{n}")
    return (sum(math.comb(n, j) for j in range(w + 1)),
            sum(math.comb(k, j) for j in range(w + 1)))


def sample_zero_codeword_llrs(spec, n, num, rng):
    """``num`` LLR vectors for the all-zero codeword, shape ``(num, n)``."""
    if spec.kind == "awgn":
        sigma2 = spec.sigma2
        y = 1.0 + math.sqrt(sigma2) * rng.standard_normal((num, n))
        return 2.0 * y / sigma2
    flips = rng.random((num, n)) < spec.p
    return np.where(flips, -1.0, 1.0) * spec.bsc_llr


def rcu_bound(n, k, spec, num_lambda_samples, rng, batch=4096):
    """Monte-Carlo random-coding union bound for an ``[n, k]`` code.

    Averages ``min(1, (2^k - 1) P[Gs(f) <= Gs(e) | llr])`` over LLR draws for
    the all-zero codeword, the inner probability by saddle point.
    """
    if num_lambda_samples < 1:
        raise InputError("need at least one LLR sample")
    log_mult = k * LN2 + math.log1p(-2.0 ** -k)
    acc = 0.0
    done = 0
    while done < num_lambda_samples:
        b = min(batch, num_lambda_samples - done)
        llrs = sample_zero_codeword_llrs(spec, n, b, rng)
        rel = np.abs(llrs)
        gs = (rel * (llrs < 0)).sum(axis=1)
        log_terms = np.minimum(0.0, log_mult + log_tail_batch(rel, gs))
        acc += float(np.exp(log_terms).sum())
        done += b
    return acc / num_lambda_samples


def grand_query_lower_bound(n, k, epsilon_rcu):
    """Lower bound ``2^(n-k) * eps_rcu`` on GRAND's average query count."""
    if not 0.0 <= epsilon_rcu <= 1.0:
        raise InputError("epsilon_rcu must lie in [0, 1]")
    return math.ldexp(float(epsilon_rcu), n - k)


def ops_model(decoder, avg_queries, n, k):
    """Average operation count per decoded word.

    GRAND: two row checks of ``2n - 1`` operations per failed guess plus a
    full syndrome ``(n - k)(2n - 1)``. GCD: a re-encoding of ``(n - k)(2k - 1)``
    operations per guess.
    """
    if avg_queries < 0:
        raise InputError("avg_queries must be nonnegative")
    if decoder == "grand":
        return (avg_queries - 1.0) * 2.0 * (2 * n - 1) + (n - k) * (2 * n - 1)
    if decoder == "gcd":
        return avg_queries * (n - k) * (2 * k - 1)
    raise InputError(f"unknown decoder {decoder!r}")


def _estimates(samples):
    return np.array([s.estimate if isinstance(s, QuerySample) else float(s) for s in samples])


def tail_fraction(samples, l_max):
    """Empirical ``P[L > l_max]`` over query-count samples."""
    est = _estimates(samples)
    return float(np.count_nonzero(est > l_max)) / est.size


def min_required_budget(samples, alpha, epsilon_target):
    """Smallest integer budget whose empirical exceedance is ``<= alpha * eps``."""
    if not 0.0 < alpha <= 1.0:
        raise InputError("alpha must lie in (0, 1]")
    est = np.sort(_estimates(samples))
    if est.size == 0:
        raise InputError("no samples")
    target = alpha * epsilon_target
    n = est.size
    if target < 1.0 / n:
        need = math.ceil(1.0 / target)
        raise ResolutionError(
            f"alpha*eps = {target:g} needs at least {need} samples, got {n}", need)
    allowed = int(math.floor(target * n + 1e-9))
    idx = max(n - allowed, 1) - 1
    ell = max(int(math.ceil(est[idx])), 0)
    return BudgetReport(l_tilde_max=ell, alpha=alpha, epsilon_target=epsilon_target,
                        tail_at_budget=tail_fraction(est, ell))


def fer_gap_bound(tail_probability):
    """Upper bound on ``FER - eps_ML`` given the budget-exceedance probability."""
    if not 0.0 <= tail_probability <= 1.0:
        raise InputError("tail probability must lie in [0, 1]")
    return float(tail_probability)


def rcu_floor(n, k):
    """High-SNR limit ``(2^k - 1) / 2^n`` of the RCU bound.

    The all-zero pattern always ties an all-zero true pattern, and ties count
    as errors, so the bound cannot fall below this value at any SNR.
    """
    return math.exp((k - n) * LN2 + math.log1p(-2.0 ** -k))


def snr_for_rcu(n, k, target, num_lambda_samples, seed, lo_db=-2.0, hi_db=30.0):
    """Eb/N0 (dB) at which the Monte-Carlo RCU bound equals ``target``.

    The same noise draws are reused at every SNR so the bound is a smooth,
    monotone function of SNR during the root search. Targets at or below
    :func:`rcu_floor` are rejected.
    """
    from scipy.optimize import brentq

    floor = rcu_floor(n, k)
    if target <= floor:
        raise InputError(f"target {target:g} is at or below the RCU floor {floor:g} "
                         f"for n={n}, k={k}; pass an explicit Eb/N0 instead")
    rate = k / n

    def log_gap(db):
        rng = np.random.default_rng(seed)
        eps = rcu_bound(n, k, ChannelSpec("awgn", db, rate), num_lambda_samples, rng)
        return math.log(max(eps, 1e-300)) - math.log(target)

    if log_gap(lo_db) < 0 or log_gap(hi_db) > 0:
        raise InputError(f"RCU target {target:g} not bracketed by [{lo_db}, {hi_db}] dB")
    return brentq(log_gap, lo_db, hi_db, xtol=1e-3)
