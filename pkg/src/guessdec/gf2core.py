"""Binary-field linear algebra, code containers and the exhaustive ML oracle.

Bit vectors and bit matrices are plain ``numpy.uint8`` arrays holding 0/1.
Codes keep the parity-check matrix exactly as loaded plus a systematic form
``[P | I]`` reached by row operations after a column permutation; decoders
that need the systematic form work in permuted coordinates and map back.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import CapacityError, CodeFormatError, DegenerateCodeError, InputError

MLD_MAX_K = 24
_MLD_CHUNK = 1 << 14


def as_bits(v, length=None, name="vector"):
    """Validate and convert to a 1-D uint8 array of 0/1 values."""
    a = np.asarray(v)
    if a.ndim != 1:
        raise InputError(f"{name} must be one-dimensional, got shape {a.shape}")
    if length is not None and a.shape[0] != length:
        raise InputError(f"{name} has length {a.shape[0]}, expected {length}")
    if a.size and not np.isin(a, (0, 1)).all():
        raise InputError(f"{name} must contain only 0/1 entries")
    return a.astype(np.uint8, copy=False)


def as_binmatrix(m, name="matrix"):
    """Validate and convert to a 2-D uint8 bit matrix with at least one row and column."""
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InputError(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if not np.isin(a, (0, 1)).all():
        raise InputError(f"{name} must contain only 0/1 entries")
    return a.astype(np.uint8)


def matvec(m, v):
    """Return ``m @ v`` over GF(2)."""
    return (m.astype(np.int64) @ v.astype(np.int64) % 2).astype(np.uint8)


def columns_as_ints(m):
    """Pack each column of a bit matrix into an int (row ``r`` -> bit ``r``)."""
    weights = 1 << np.arange(m.shape[0], dtype=np.int64)
    if m.shape[0] > 62:
        return [sum(1 << int(r) for r in np.flatnonzero(m[:, c])) for c in range(m.shape[1])]
    return [int(x) for x in weights @ m.astype(np.int64)]


def bits_to_int(v):
    return int(sum(1 << int(i) for i in np.flatnonzero(v)))


def int_to_bits(x, length):
    return np.array([(x >> i) & 1 for i in range(length)], dtype=np.uint8)


def gf2_rank(m):
    a = as_binmatrix(m).copy()
    rank = 0
    rows, cols = a.shape
    for c in range(cols):
        hits = np.flatnonzero(a[rank:, c])
        if hits.size == 0:
            continue
        p = rank + hits[0]
        a[[rank, p]] = a[[p, rank]]
        below = np.flatnonzero(a[:, c])
        below = below[below != rank]
        a[below] ^= a[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def to_systematic(h):
    """Bring a full-rank parity-check matrix to the form ``[P | I]``.

    Pivot columns are searched from the last column backwards, so when the
    last ``n - k`` columns of ``h`` are already independent no permutation is
    needed.

    Returns
    -------
    p_sub : ndarray, shape (n-k, k)
    col_perm : ndarray, shape (n,)
        ``h[:, col_perm]`` row-reduces to ``[p_sub | I]``.
    """
    a = as_binmatrix(h, "h").copy()
    r, n = a.shape
    if r >= n:
        raise DegenerateCodeError(f"h has {r} rows and {n} columns; need rows < columns")
    pivot_of_col = {}
    used = np.zeros(r, dtype=bool)
    for c in range(n - 1, -1, -1):
        if len(pivot_of_col) == r:
            break
        hits = np.flatnonzero(a[:, c] & ~used)
        if hits.size == 0:
            continue
        p = hits[-1]
        others = np.flatnonzero(a[:, c])
        others = others[others != p]
        a[others] ^= a[p]
        used[p] = True
        pivot_of_col[c] = p
    if len(pivot_of_col) < r:
        raise DegenerateCodeError(
            f"h has rank {len(pivot_of_col)} but {r} rows; remove dependent rows first"
        )
    pivot_cols = sorted(pivot_of_col)
    info_cols = [c for c in range(n) if c not in pivot_of_col]
    row_order = [pivot_of_col[c] for c in pivot_cols]
    col_perm = np.array(info_cols + pivot_cols, dtype=np.intp)
    reduced = a[row_order][:, col_perm]
    return reduced[:, : n - r].copy(), col_perm


@dataclass(frozen=True, eq=False)
class LinearCode:
    """An ``[n, k]`` binary linear code.

    ``h_original`` is the parity-check matrix as supplied. ``p_sub`` and
    ``col_perm`` describe the systematic form: ``h_original[:, col_perm]`` is
    row-equivalent to ``[p_sub | I]``. In permuted coordinates the first ``k``
    positions carry information and a message ``u`` encodes to
    ``(u, u @ p_sub.T)``.
    """

    n: int
    k: int
    h_original: np.ndarray
    p_sub: np.ndarray
    col_perm: np.ndarray

    @classmethod
    def from_parity_check(cls, h):
        h = as_binmatrix(h, "h")
        p_sub, col_perm = to_systematic(h)
        n = h.shape[1]
        return cls(n=n, k=n - h.shape[0], h_original=h, p_sub=p_sub, col_perm=col_perm)

    @property
    def redundancy(self):
        return self.n - self.k

    @property
    def rate(self):
        return self.k / self.n

    @cached_property
    def inv_perm(self):
        inv = np.empty(self.n, dtype=np.intp)
        inv[self.col_perm] = np.arange(self.n)
        return inv

    @cached_property
    def h_systematic(self):
        return np.hstack([self.p_sub, np.eye(self.n - self.k, dtype=np.uint8)])

    @cached_property
    def generator_systematic(self):
        """``G = [I | P^T]`` in permuted coordinates."""
        return np.hstack([np.eye(self.k, dtype=np.uint8), self.p_sub.T.copy()])

    @cached_property
    def h_column_ints(self):
        """Columns of ``h_original`` packed as ints, for XOR syndrome updates."""
        return columns_as_ints(self.h_original)

    @cached_property
    def p_column_ints(self):
        """Columns of ``p_sub`` packed as ints; ``e_info @ P^T`` is their XOR."""
        return columns_as_ints(self.p_sub)

    def to_permuted(self, v):
        return np.asarray(v)[..., self.col_perm]

    def from_permuted(self, v):
        return np.asarray(v)[..., self.inv_perm]

    def encode(self, message):
        """Encode ``k`` message bits into a codeword in original coordinates."""
        u = as_bits(message, self.k, "message")
        c_perm = np.concatenate([u, matvec(self.p_sub, u)])
        return self.from_permuted(c_perm)

    def is_codeword(self, c):
        return not syndrome(self, c).any()

    @cached_property
    def _codebook(self):
        return _enumerate_codewords(self, 0, 1 << self.k)


def _enumerate_codewords(code, start, stop):
    msgs = np.arange(start, stop, dtype=np.int64)
    # bit j of message index -> info position k-1-j, so index order is lexicographic in u
    shifts = np.arange(code.k - 1, -1, -1, dtype=np.int64)
    u = ((msgs[:, None] >> shifts) & 1).astype(np.uint8)
    parity = (u.astype(np.int64) @ code.p_sub.T.astype(np.int64) % 2).astype(np.uint8)
    c_perm = np.hstack([u, parity])
    return c_perm[:, code.inv_perm]


def syndrome(code, z, systematic=False):
    """Syndrome of a hard-decision word.

    With ``systematic=False`` this is ``z @ h_original.T`` in original
    coordinates; with ``systematic=True`` ``z`` is taken in permuted
    coordinates and multiplied by ``[P | I]^T``.
    """
    z = as_bits(z, code.n, "z")
    h = code.h_systematic if systematic else code.h_original
    return matvec(h, z)


def reencode_parity(p_sub, e_info, s):
    """Parity part ``s + e_info @ P^T`` of the unique valid pattern extending ``e_info``."""
    p_sub = as_binmatrix(p_sub, "p_sub")
    e_info = as_bits(e_info, p_sub.shape[1], "e_info")
    s = as_bits(s, p_sub.shape[0], "s")
    return s ^ matvec(p_sub, e_info)


def random_linear_code(n, k, seed):
    """Systematic random code with ``H = [P | I]`` and ``P`` uniform over bit matrices."""
    if not (isinstance(n, (int, np.integer)) and isinstance(k, (int, np.integer))):
        raise InputError("n and k must be integers")
    if not 1 <= k < n:
        raise InputError(f"need 1 <= k < n, got n={n}, k={k}")
    rng = np.random.default_rng(seed)
    p_sub = rng.integers(0, 2, size=(n - k, k), dtype=np.uint8)
    h = np.hstack([p_sub, np.eye(n - k, dtype=np.uint8)])
    return LinearCode(n=int(n), k=int(k), h_original=h, p_sub=p_sub,
                      col_perm=np.arange(n, dtype=np.intp))


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _ints(line, lineno):
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise CodeFormatError(f"expected integers, got {line!r}", lineno) from None


def parse_dense_text(text):
    lines = list(_content_lines(text))
    if not lines:
        raise CodeFormatError("empty file")
    lineno, header = lines[0]
    head = _ints(header, lineno)
    if len(head) != 2:
        raise CodeFormatError("header must be 'n k'", lineno)
    n, k = head
    if not 1 <= k < n:
        raise CodeFormatError(f"invalid dimensions n={n}, k={k}", lineno)
    body = lines[1:]
    if len(body) != n - k:
        raise CodeFormatError(f"expected {n - k} rows of H, found {len(body)}")
    h = np.zeros((n - k, n), dtype=np.uint8)
    for r, (lineno, row) in enumerate(body):
        row = row.replace(" ", "")
        if len(row) != n:
            raise CodeFormatError(f"row has {len(row)} entries, expected {n}", lineno)
        if set(row) - {"0", "1"}:
            raise CodeFormatError("rows may contain only '0' and '1'", lineno)
        h[r] = np.frombuffer(row.encode(), dtype=np.uint8) - ord("0")
    return h


def parse_alist(text):
    lines = list(_content_lines(text))
    if len(lines) < 4:
        raise CodeFormatError("alist needs at least four header lines")
    (l1, s1), (l2, _), (l3, s3), (l4, s4) = lines[:4]
    dims = _ints(s1, l1)
    if len(dims) != 2:
        raise CodeFormatError("first line must be 'n m'", l1)
    n, m = dims
    if not 1 <= m < n:
        raise CodeFormatError(f"invalid dimensions n={n}, m={m}", l1)
    col_w = _ints(s3, l3)
    row_w = _ints(s4, l4)
    if len(col_w) != n:
        raise CodeFormatError(f"expected {n} column weights, got {len(col_w)}", l3)
    if len(row_w) != m:
        raise CodeFormatError(f"expected {m} row weights, got {len(row_w)}", l4)
    rest = lines[4:]
    if len(rest) < n:
        raise CodeFormatError(f"expected {n} column index lines, found {len(rest)}")
    h = np.zeros((m, n), dtype=np.uint8)
    for c, (lineno, s) in enumerate(rest[:n]):
        idx = [i for i in _ints(s, lineno) if i != 0]
        if len(idx) != col_w[c]:
            raise CodeFormatError(f"column {c + 1} lists {len(idx)} rows, weight says {col_w[c]}",
                                  lineno)
        for i in idx:
            if not 1 <= i <= m:
                raise CodeFormatError(f"row index {i} out of range 1..{m}", lineno)
            h[i - 1, c] = 1
    row_lines = rest[n:]
    if row_lines:
        if len(row_lines) != m:
            raise CodeFormatError(f"expected {m} row index lines, found {len(row_lines)}")
        for r, (lineno, s) in enumerate(row_lines):
            idx = sorted(i for i in _ints(s, lineno) if i != 0)
            if len(idx) != row_w[r]:
                raise CodeFormatError(f"row {r + 1} lists {len(idx)} columns, weight says {row_w[r]}",
                                      lineno)
            if idx != [int(c) + 1 for c in np.flatnonzero(h[r])]:
                raise CodeFormatError(f"row {r + 1} disagrees with the column lists", lineno)
    return h


def load_code(path, format="dense-text"):
    """Load a code from a ``dense-text`` or ``alist`` file.

    Dense text: a header line ``n k`` followed by ``n - k`` rows of ``n``
    characters from ``{0, 1}``. Index 0 of a row is the first code position.
    """
    text = Path(path).read_text()
    if format == "dense-text":
        h = parse_dense_text(text)
    elif format == "alist":
        h = parse_alist(text)
    else:
        raise InputError(f"unknown code format {format!r}")
    return LinearCode.from_parity_check(h)


def dense_text(h):
    h = as_binmatrix(h)
    rows = ["".join(map(str, row)) for row in h]
    return f"{h.shape[1]} {h.shape[1] - h.shape[0]}\n" + "\n".join(rows) + "\n"


def alist_text(h):
    h = as_binmatrix(h)
    m, n = h.shape
    col_w = h.sum(axis=0)
    row_w = h.sum(axis=1)
    out = [f"{n} {m}", f"{col_w.max()} {row_w.max()}",
           " ".join(map(str, col_w)), " ".join(map(str, row_w))]
    for c in range(n):
        idx = [i + 1 for i in np.flatnonzero(h[:, c])]
        out.append(" ".join(map(str, idx + [0] * (col_w.max() - len(idx)))))
    for r in range(m):
        idx = [i + 1 for i in np.flatnonzero(h[r])]
        out.append(" ".join(map(str, idx + [0] * (row_w.max() - len(idx)))))
    return "\n".join(out) + "\n"


def save_code(code, path, format="dense-text"):
    if format == "dense-text":
        text = dense_text(code.h_original)
    elif format == "alist":
        text = alist_text(code.h_original)
    else:
        raise InputError(f"unknown code format {format!r}")
    Path(path).write_text(text)


def brute_force_mld(code, llr):
    """Exhaustive maximum-likelihood decoding.

    Enumerates all ``2^k`` codewords and returns the one whose test error
    pattern ``z ^ c`` has the smallest soft weight, together with that weight.
    Ties go to the lexicographically smallest codeword.
    """
    if code.k > MLD_MAX_K:
        raise CapacityError(f"exhaustive ML decoding refused for k={code.k} > {MLD_MAX_K}")
    llr = np.asarray(llr, dtype=float)
    if llr.shape != (code.n,):
        raise InputError(f"llr has shape {llr.shape}, expected ({code.n},)")
    z = (llr < 0).astype(np.uint8)
    rel = np.abs(llr)
    best_w = np.inf
    best = []
    total = 1 << code.k
    for start in range(0, total, _MLD_CHUNK):
        stop = min(total, start + _MLD_CHUNK)
        book = code._codebook[start:stop] if code.k <= 16 else _enumerate_codewords(code, start, stop)
        w = (book ^ z) @ rel
        wmin = w.min()
        tol = 1e-12 * max(1.0, abs(best_w) if np.isfinite(best_w) else 0.0, abs(wmin))
        if wmin < best_w - tol:
            best_w = wmin
            best = [book[i] for i in np.flatnonzero(w <= wmin + tol)]
        elif wmin <= best_w + tol:
            best.extend(book[i] for i in np.flatnonzero(w <= best_w + tol))
    winner = min(best, key=lambda c: tuple(c))
    return winner.copy(), float(((winner ^ z) * rel).sum())
