"""Test-error-pattern (TEP) weights and ordered pattern generators.

Three orders are supported:

``soft``
    non-decreasing soft weight (sum of reliabilities of flipped bits). Patterns
    live on a successor tree over reliability-ascending coordinates: the
    children of a pattern whose highest flipped position is ``j`` are the
    pattern with that flip moved to ``j+1`` and the pattern with ``j+1``
    flipped in addition. Every child weighs at least as much as its parent,
    so popping a min-heap seeded with the empty pattern yields all ``2^m``
    patterns exactly once and in order.
``hamming``
    every weight-``w`` pattern before any weight-``w+1`` pattern, by soft
    weight within a weight class (same tree, different heap key).
``orb``
    non-decreasing logistic weight (sum of reliability ranks), enumerated as
    partitions of ``w = 0, 1, 2, ...`` into distinct parts no larger than
    ``m``.

Ties are broken deterministically: soft by (Hamming weight, sorted support in
reliability-ascending coordinates); hamming by (soft weight, same support
order). The hamming order is produced one weight class at a time with numpy,
which also lets decoders check a whole class in a single vectorised step; orb by the partition enumeration order (largest part descending).
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, PatternBudgetError

ORDERS = ("hamming", "soft", "orb")
DEFAULT_MAX_FRONTIER = 1 << 20


@dataclass(frozen=True, slots=True)
class Tep:
    """A test error pattern of length ``m``.

    ``support`` lists flipped positions in generator coordinates (ascending).
    ``tag`` is the XOR of the per-position tags handed to the stream, which
    lets decoders update syndromes in O(1) per pattern.
    """

    support: tuple
    m: int
    gamma_h: int
    gamma_s: float
    gamma_l: int
    tag: int = 0

    @property
    def bits(self):
        b = np.zeros(self.m, dtype=np.uint8)
        b[list(self.support)] = 1
        return b

    def __str__(self):
        return "".join(map(str, self.bits))


def rank_map(reliabilities):
    """Ranks 1..m with rank 1 on the least reliable position (ties by index)."""
    r = np.asarray(reliabilities, dtype=float)
    ranks = np.empty(r.shape[0], dtype=np.int64)
    ranks[np.argsort(r, kind="stable")] = np.arange(1, r.shape[0] + 1)
    return ranks


def compute_weights(bits, reliabilities, ranks=None):
    """Return ``(hamming, soft, logistic)`` weights of a bit pattern."""
    bits = np.asarray(bits)
    r = np.asarray(reliabilities, dtype=float)
    if ranks is None:
        ranks = rank_map(r)
    ranks = np.asarray(ranks)
    if not bits.shape == r.shape == ranks.shape:
        raise InputError(f"length mismatch: bits {bits.shape}, reliabilities {r.shape}, "
                         f"ranks {ranks.shape}")
    sup = np.flatnonzero(bits)
    return int(sup.size), math.fsum(r[sup]), int(ranks[sup].sum())


def distinct_partitions(total, max_part):
    """Partitions of ``total`` into distinct parts ``<= max_part``.

    Parts are listed in descending order; partitions come out with the
    largest part descending, recursively.
    """
    if total == 0:
        yield ()
        return
    for largest in range(min(total, max_part), 0, -1):
        rest = total - largest
        if rest > largest * (largest - 1) // 2:
            break
        for tail in distinct_partitions(rest, largest - 1):
            yield (largest,) + tail


class PatternStream:
    """Single-consumer iterator over all ``2^m`` patterns in a given order.

    Parameters
    ----------
    order : {"hamming", "soft", "orb"}
    reliabilities : array_like, shape (m,)
        Nonnegative bit reliabilities ``|llr|`` over the generator span.
    tags : sequence of int, optional
        Per-position integers XOR-accumulated into ``Tep.tag``.
    max_frontier : int
        Heap-size cap for the tree-based orders; exceeding it raises
        :class:`PatternBudgetError`.
    """

    def __init__(self, order, reliabilities, tags=None, max_frontier=DEFAULT_MAX_FRONTIER):
        if order not in ORDERS:
            raise InputError(f"unknown pattern order {order!r}; choose from {ORDERS}")
        r = np.asarray(reliabilities, dtype=float)
        if r.ndim != 1:
            raise InputError("reliabilities must be one-dimensional")
        if (r < 0).any() or not np.isfinite(r).all():
            raise InputError("reliabilities must be finite and nonnegative")
        self.order = order
        self.m = r.shape[0]
        self.max_frontier = max_frontier
        self.perm = np.argsort(r, kind="stable")
        self._perm = [int(i) for i in self.perm]
        self._r = [float(x) for x in r[self.perm]]
        if tags is None:
            self._t = [0] * self.m
        else:
            if len(tags) != self.m:
                raise InputError(f"{len(tags)} tags for {self.m} positions")
            self._t = [int(tags[i]) for i in self._perm]
        self.count = 0
        self._it = {"soft": self._tree, "hamming": self._hamming, "orb": self._orb}[order]()

    def __iter__(self):
        return self

    def __next__(self):
        sup, gs, tag = next(self._it)
        self.count += 1
        return Tep(support=tuple(sorted(self._perm[p] for p in sup)), m=self.m,
                   gamma_h=len(sup), gamma_s=gs, gamma_l=sum(sup) + len(sup), tag=tag)

    def raw(self):
        """Yield ``(support, soft_weight, tag)`` with support in sorted coordinates.

        Cheaper than iterating :class:`Tep` objects; sorted position ``p``
        maps to generator position ``self.perm[p]``.
        """
        for item in self._it:
            self.count += 1
            yield item

    def to_tep(self, sup, gs, tag=0):
        return Tep(support=tuple(sorted(self._perm[p] for p in sup)), m=self.m,
                   gamma_h=len(sup), gamma_s=gs, gamma_l=sum(sup) + len(sup), tag=tag)

    def _tree(self):
        r, t, m = self._r, self._t, self.m
        fsum = math.fsum
        push, pop = heapq.heappush, heapq.heappop
        cap = self.max_frontier
        # heap entries: (soft weight, hamming weight, support, tag)
        heap = [(0.0, 0, (), 0)]
        while heap:
            gs, h, sup, tag = pop(heap)
            yield sup, gs, tag
            if not sup:
                if m:
                    push(heap, (r[0], 1, (0,), t[0]))
                continue
            j = sup[-1]
            if j + 1 >= m:
                continue
            shifted = sup[:-1] + (j + 1,)
            extended = sup + (j + 1,)
            # correctly rounded sums keep children >= parents and match brute-force weights exactly
            push(heap, (fsum([r[p] for p in shifted]), h, shifted, tag ^ t[j] ^ t[j + 1]))
            push(heap, (fsum([r[p] for p in extended]), h + 1, extended, tag ^ t[j + 1]))
            if len(heap) > cap:
                raise PatternBudgetError(
                    f"pattern frontier exceeded {cap} entries after {self.count} patterns")

    def blocks(self):
        """Hamming order only: yield one weight class at a time as arrays.

        Each item is ``(supports, soft_weights, tags)`` where ``supports`` has
        shape ``(C(m, w), w)`` in sorted coordinates, rows already in emission
        order. Classes larger than ``max_frontier`` raise
        :class:`PatternBudgetError`.
        """
        if self.order != "hamming":
            raise InputError("blocks() is only available for the hamming order")
        r = np.array(self._r)
        wide = any(x >> 62 for x in self._t)
        t = np.array(self._t, dtype=object if wide else np.int64)
        for w in range(self.m + 1):
            size = math.comb(self.m, w)
            if size > self.max_frontier:
                raise PatternBudgetError(
                    f"weight-{w} class has {size} patterns, above the cap of {self.max_frontier}")
            flat = np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(self.m), w)),
                               dtype=np.intp, count=size * w)
            sup = flat.reshape(size, w)
            gs = r[sup].sum(axis=1)
            tags = np.bitwise_xor.reduce(t[sup], axis=1) if w else np.zeros(1, dtype=t.dtype)
            # combinations() is lexicographic already, so a stable sort keeps the tie-break
            idx = np.argsort(gs, kind="stable")
            yield sup[idx], gs[idx], tags[idx]

    def _hamming(self):
        for sup, gs, tags in self.blocks():
            for row, g, tag in zip(sup.tolist(), gs.tolist(), tags.tolist()):
                yield tuple(row), g, tag

    def _orb(self):
        r, t, m = self._r, self._t, self.m
        fsum = math.fsum
        for w in range(m * (m + 1) // 2 + 1):
            for parts in distinct_partitions(w, m):
                sup = tuple(p - 1 for p in reversed(parts))
                tag = 0
                for p in sup:
                    tag ^= t[p]
                yield sup, fsum([r[p] for p in sup]), tag


def next_pattern(stream):
    """Next pattern from ``stream``, or ``None`` once all patterns are emitted."""
    return next(stream, None)
