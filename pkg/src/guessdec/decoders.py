"""GRAND and GCD decoders with optional soft output.

Both decoders draw test error patterns from :class:`~guessdec.patterns.PatternStream`.
GRAND guesses full-length noise patterns and checks the syndrome; GCD guesses
patterns over the ``k`` information positions of the systematic form,
re-encodes the parity part, and keeps the lightest candidate seen so far.

Query accounting: GRAND counts syndrome checks; GCD counts re-encodings. A
GCD pattern that is drawn only to evaluate the stopping rule (and then
stops the search) is not counted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channels import ReceivedWord, received_from_llr
from .errors import InputError
from .gf2core import int_to_bits
from .patterns import DEFAULT_MAX_FRONTIER, ORDERS, PatternStream

STOP_KINDS = ("membership", "trivial", "dai", "budget")


@dataclass(frozen=True)
class StopRule:
    """Stopping rule. ``membership`` is GRAND's; the rest apply to GCD.

    For ``dai`` the offset ``tau`` defaults to the expected parity-part soft
    weight of each received word (see :func:`dai_tau`).
    """

    kind: str
    tau: float | None = None

    def __post_init__(self):
        if self.kind not in STOP_KINDS:
            raise InputError(f"unknown stop rule {self.kind!r}; choose from {STOP_KINDS}")
        if self.tau is not None and (self.kind != "dai" or self.tau < 0):
            raise InputError("tau applies to the dai rule only and must be >= 0")


@dataclass(frozen=True)
class SoftOutput:
    block_posteriors: list
    bit_llrs: np.ndarray
    residual: float


@dataclass
class DecodeOutcome:
    codeword: np.ndarray
    queries_used: int
    found: bool
    tep_soft_weight: float
    ml_certified: bool
    visited: list | None = None
    soft: SoftOutput | None = None
    hits: list = field(default_factory=list)
    budget_exhausted: bool = False


def _as_received(received):
    return received if isinstance(received, ReceivedWord) else received_from_llr(received)


def pattern_log_probability_offset(reliabilities):
    """``log P(e = 0 | y)``; any pattern has ``log P = offset - soft_weight``."""
    return -float(np.logaddexp(0.0, -np.asarray(reliabilities, dtype=float)).sum())


def dai_tau(parity_reliabilities):
    """Expected parity-part soft weight ``sum |l| / (1 + exp(|l|))``."""
    r = np.asarray(parity_reliabilities, dtype=float)
    if (r < 0).any():
        raise InputError("reliabilities must be nonnegative")
    # r * exp(-r) / (1 + exp(-r)) avoids overflow for large r
    return float(np.sum(r * np.exp(-r - np.logaddexp(0.0, -r))))


def _budget(l_max, m):
    full = 1 << m
    if l_max is None:
        return full
    if l_max < 1:
        raise InputError(f"l_max must be >= 1, got {l_max}")
    return min(int(l_max), full)


def _support_int(bits):
    return sum(1 << int(i) for i in np.flatnonzero(bits))


def grand(code, received, order="soft", l_max=None, list_size=1, soft_output=False,
          record_visited=False, max_frontier=DEFAULT_MAX_FRONTIER):
    """Guess noise patterns of length ``n`` until the syndrome matches.

    Parameters
    ----------
    list_size : int or None
        Stop after this many valid patterns; ``None`` keeps sweeping until the
        budget runs out. ``hits`` in the outcome lists every valid pattern
        found as ``(query_index, codeword, soft_weight, probability)``.
    soft_output : bool
        Attach block posteriors and bit LLRs computed from the hits and the
        probability mass of all tested patterns.

    Returns ``z`` with ``found=False`` if no valid pattern turns up within
    ``l_max`` queries.
    """
    if order not in ORDERS:
        raise InputError(f"unknown order {order!r}")
    rx = _as_received(received)
    if rx.n != code.n:
        raise InputError(f"received word has length {rx.n}, code has n={code.n}")
    z, rel = rx.z, rx.reliabilities
    budget = _budget(l_max, code.n)
    cols = code.h_column_ints
    s = 0
    for i in np.flatnonzero(z):
        s ^= cols[i]
    log_p0 = pattern_log_probability_offset(rel)
    want = math.inf if list_size is None else int(list_size)
    stream = PatternStream(order, rel, tags=cols, max_frontier=max_frontier)
    perm = stream.perm
    hits = []
    visited = [] if record_visited else None
    tested_mass = 0.0
    q = 0

    def hit(sup, gs):
        e = np.zeros(code.n, dtype=np.uint8)
        e[perm[list(sup)]] = 1
        hits.append((q, z ^ e, gs, math.exp(log_p0 - gs)))

    if order == "hamming" and not record_visited:
        for sups, gss, tags in stream.blocks():
            take = min(len(gss), budget - q)
            tags, gss = tags[:take], gss[:take]
            idx = np.flatnonzero(tags == s)
            if len(hits) + len(idx) >= want:
                idx = idx[: int(want - len(hits))]
                take = int(idx[-1]) + 1
            if soft_output:
                tested_mass += float(np.exp(log_p0 - gss[:take]).sum())
            base = q
            for i in idx:
                q = base + int(i) + 1
                hit(sups[i], float(gss[i]))
            q = base + take
            if len(hits) >= want or q >= budget:
                break
    else:
        for sup, gs, tag in stream.raw():
            q += 1
            if soft_output or record_visited:
                p = math.exp(log_p0 - gs)
                tested_mass += p
                if record_visited:
                    visited.append((stream.to_tep(sup, gs, tag), p))
            if tag == s:
                hit(sup, gs)
                if len(hits) >= want:
                    break
            if q >= budget:
                break

    found = bool(hits)
    out = DecodeOutcome(
        codeword=hits[0][1] if found else z.copy(),
        queries_used=hits[0][0] if (found and list_size == 1) else q,
        found=found,
        tep_soft_weight=hits[0][2] if found else math.nan,
        ml_certified=found and order == "soft",
        visited=visited,
        hits=hits,
        budget_exhausted=not found,
    )
    if soft_output and found:
        out.soft = _posteriors([h[1] for h in hits], [h[3] for h in hits], tested_mass,
                               code.n, code.k)
    return out


def gcd(code, received, order="soft", l_max=None, stop=StopRule("trivial"), soft_output=False,
        list_size=None, weighting="codeword", max_frontier=DEFAULT_MAX_FRONTIER):
    """Guess information-part patterns, re-encode, keep the lightest candidate.

    The stopping rule is checked on each newly drawn information pattern
    before it is re-encoded: ``trivial`` stops once the best full pattern is
    no heavier than the new information part, ``dai`` allows an extra
    ``tau``. The result is the best candidate so far, mapped back to original
    coordinates. ``ml_certified`` is set when the trivial rule fires under the
    soft order or when all ``2^k`` information patterns were tried.

    With ``soft_output`` the first ``list_size`` re-encodings (all of them
    when ``None``) form the list for the block posteriors; ``weighting`` is
    passed to :func:`gcd_soft_output`.
    """
    if order not in ORDERS:
        raise InputError(f"unknown order {order!r}")
    if isinstance(stop, str):
        stop = StopRule(stop)
    if stop.kind == "membership":
        raise InputError("membership stopping is GRAND's rule; use trivial, dai or budget for GCD")
    rx = _as_received(received)
    if rx.n != code.n:
        raise InputError(f"received word has length {rx.n}, code has n={code.n}")
    n, k = code.n, code.k
    zp = code.to_permuted(rx.z)
    rp = code.to_permuted(rx.reliabilities)
    r_info, r_par = rp[:k], rp[k:]
    budget = _budget(l_max, k)

    pcols = code.p_column_ints
    s = 0
    for i in np.flatnonzero(zp[:k]):
        s ^= pcols[i]
    s ^= _support_int(zp[k:])

    # soft weight of a parity pattern via per-byte lookup tables
    tables = []
    for c in range(0, n - k, 8):
        chunk = r_par[c:c + 8]
        tab = np.zeros(256)
        for b in range(chunk.size):
            tab[np.arange(256) & (1 << b) != 0] += chunk[b]
        tables.append(tab.tolist())
    shifts = [8 * i for i in range(len(tables))]

    def parity_weight(x):
        return sum(tab[(x >> sh) & 255] for tab, sh in zip(tables, shifts))

    if stop.kind == "dai":
        offset = dai_tau(r_par) if stop.tau is None else stop.tau
    elif stop.kind == "trivial":
        offset = 0.0
    else:
        offset = None

    stream = PatternStream(order, r_info, tags=pcols, max_frontier=max_frontier)
    best_w = math.inf
    best_sup, best_par = (), s
    fired = False
    q = 0
    listed = []
    keep = math.inf if list_size is None else int(list_size)
    for sup, gs_info, tag in stream.raw():
        if offset is not None and best_w <= gs_info + offset:
            fired = True
            break
        q += 1
        par = s ^ tag
        w = gs_info + parity_weight(par)
        if soft_output and len(listed) < keep:
            listed.append((sup, par, gs_info, w))
        if w < best_w:
            best_w, best_sup, best_par = w, sup, par
        if q >= budget:
            break
    exhausted = q == (1 << k)

    perm = stream.perm
    e = np.zeros(n, dtype=np.uint8)
    e[perm[list(best_sup)]] = 1
    e[k:] = int_to_bits(best_par, n - k)
    cw = code.from_permuted(zp ^ e)
    out = DecodeOutcome(
        codeword=cw,
        queries_used=q,
        found=True,
        tep_soft_weight=float(best_w),
        ml_certified=(fired and stop.kind == "trivial" and order == "soft") or exhausted,
        budget_exhausted=offset is not None and not fired and not exhausted,
    )
    if soft_output:
        words, info_w, full_w = [], [], []
        for sup, par, gs_info, w in listed:
            e = np.zeros(n, dtype=np.uint8)
            e[perm[list(sup)]] = 1
            e[k:] = int_to_bits(par, n - k)
            words.append(code.from_permuted(zp ^ e))
            info_w.append(gs_info)
            full_w.append(w)
        out.soft = _gcd_posteriors(words, info_w, full_w, r_info, rp, n, k, weighting)
    return out


def _posteriors(codewords, probs, covered_mass, n, k):
    probs = np.asarray(probs, dtype=float)
    uncovered = max(0.0, 1.0 - covered_mass)
    # (2^k - 1) / (2^n - 1) computed without forming huge integers
    ratio = math.exp((k - n) * math.log(2.0) + math.log1p(-2.0 ** -k) - math.log1p(-2.0 ** -n))
    denom = probs.sum() + uncovered * ratio
    post = probs / denom
    residual = max(0.0, 1.0 - float(post.sum()))
    words = np.array(codewords, dtype=np.uint8).reshape(len(codewords), n)
    p1 = post @ words + 0.5 * residual
    p0 = post @ (1 - words) + 0.5 * residual
    with np.errstate(divide="ignore"):
        llr = np.log(p0) - np.log(p1)
    return SoftOutput(block_posteriors=[(w.copy(), float(p)) for w, p in zip(words, post)],
                      bit_llrs=llr, residual=residual)


def grand_soft_output(visited, hits, n, k, z=None):
    """Block posteriors and bit LLRs from a GRAND pattern sweep.

    ``visited`` is the tested sequence of ``(pattern, probability)`` pairs
    (pattern as a bit vector or :class:`~guessdec.patterns.Tep`); ``hits``
    are 0-based indices into it of valid patterns. Codewords are ``z ^ pattern``
    (the patterns themselves when ``z`` is omitted). The uncovered mass is
    one minus the total probability of the tested patterns.
    """
    if len(hits) == 0:
        raise InputError("soft output needs at least one valid pattern")
    z = np.zeros(n, dtype=np.uint8) if z is None else np.asarray(z, dtype=np.uint8)
    words, probs = [], []
    for q in hits:
        pat, p = visited[q]
        bits = pat.bits if hasattr(pat, "bits") else np.asarray(pat, dtype=np.uint8)
        words.append(z ^ bits)
        probs.append(p)
    covered = math.fsum(p for _, p in visited)
    return _posteriors(words, probs, covered, n, k)


def _gcd_posteriors(words, info_weights, full_weights, r_info, r_all, n, k, weighting):
    if weighting not in ("codeword", "info"):
        raise InputError(f"unknown weighting {weighting!r}; choose codeword or info")
    log_p_info = pattern_log_probability_offset(r_info) - np.asarray(info_weights, dtype=float)
    covered = math.fsum(np.exp(log_p_info))
    if weighting == "info":
        probs = np.exp(log_p_info)
    else:
        probs = np.exp(pattern_log_probability_offset(r_all) - np.asarray(full_weights, dtype=float))
    return _posteriors(words, probs, covered, n, k)


def gcd_soft_output(code, info_patterns, received, L=None, weighting="codeword"):
    """Block posteriors from the first ``L`` GCD re-encodings.

    ``info_patterns`` are bit vectors over the ``k`` information positions
    (permuted coordinates). The mass already explored is the sum of the
    information-part marginals ``P_I``: the product over information
    positions of the per-bit error/no-error probabilities, i.e. the mass of
    all parity completions of each guess. Each listed codeword is weighted by
    the probability of its full re-encoded pattern (``weighting="codeword"``),
    or by its marginal ``P_I`` (``weighting="info"``).
    """
    rx = _as_received(received)
    pats = list(info_patterns)[:L]
    if not pats:
        raise InputError("soft output needs at least one information pattern")
    k = code.k
    zp = code.to_permuted(rx.z)
    rp = code.to_permuted(rx.reliabilities)
    s = code.h_systematic.astype(np.int64) @ zp % 2
    words, info_w, full_w = [], [], []
    for e_info in pats:
        e_info = np.asarray(e_info, dtype=np.uint8)
        par = code.p_sub.astype(np.int64) @ e_info % 2
        e = np.concatenate([e_info, (s ^ par).astype(np.uint8)])
        words.append(code.from_permuted(zp ^ e))
        info_w.append(float(rp[:k] @ e_info))
        full_w.append(float(rp @ e))
    return _gcd_posteriors(words, info_w, full_w, rp[:k], rp, code.n, k, weighting)
