"""First- and second-order differential uniformity.

delta2 enumerates unordered pairs {a, a'} (a < a' as ints) and histograms
D^2 f over the whole field for each pair.  Two things keep this tractable
at n around 12:

* every count for a pair is bounded by deg(D^2 f) unless D^2 f is constant
  (count q), and those degrees are computed for all pairs at once from the
  coefficient identity below, so the scan can stop at the first pair that
  attains the global bound (when a lone coefficient term is provably
  nonzero for every pair, the all-pairs pass is skipped and the top
  possible degree serves as the bound);
* pairs are histogrammed in blocks as one 2-D bincount.

Coefficient identity: the x^k coefficient of D^2_{a,b} f is
sum_{s >= 1, binom(k+s, s) odd} c_{k+s} * (a^s + b^s + (a+b)^s).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice

import numpy as np

from ._parallel import default_threads, ordered_map
from .errors import InvalidArgument
from .field import FieldElement, FieldSpec, field_new
from .poly import DerivativePair, Poly, _check_pair

# elements per 2-D histogram block
BLOCK_CELLS = 1 << 21
# above this input degree the all-pairs coefficient pass costs more than it saves
DEGREE_SCAN_MAX = 64


@dataclass
class UniformityReport:
    value: int
    witnesses: list[tuple[FieldElement, FieldElement | None, FieldElement]]
    degenerate: bool = False
    histogram_summary: dict[int, int] | None = None
    order: int = 2

    @property
    def witness(self):
        return self.witnesses[0] if self.witnesses else None

    def to_json(self) -> dict:
        key = "delta2" if self.order == 2 else "delta"
        out: dict = {key: self.value}
        w = self.witness
        if w is not None:
            a, b, beta = w
            wj = {"alpha": a.hex()}
            if b is not None:
                wj["alpha_prime"] = b.hex()
            wj["beta"] = beta.hex()
            out["witness"] = wj
        else:
            out["witness"] = None
        out["degenerate"] = self.degenerate
        if self.histogram_summary is not None:
            out["histogram"] = {str(k): v for k, v in sorted(self.histogram_summary.items())}
        return out


def truth_table(f: Poly) -> np.ndarray:
    return f.values()


def second_derivative_values(tt: np.ndarray, a: int, b: int) -> np.ndarray:
    X = np.arange(len(tt), dtype=np.int64)
    return tt ^ tt[X ^ a] ^ tt[X ^ b] ^ tt[X ^ a ^ b]


def solution_count(f: Poly, pair: DerivativePair, beta: FieldElement) -> int:
    """#{x : D^2_{a,a'} f(x) = beta}."""
    _check_pair(f, pair)
    if beta.field != f.field:
        raise InvalidArgument("beta lives in another field")
    vals = second_derivative_values(truth_table(f), pair.a, pair.b)
    return int(np.count_nonzero(vals == beta.value))


def _pair_block_counts(tt: np.ndarray, A: np.ndarray, B: np.ndarray):
    """Per-pair (max count, smallest beta attaining it, full count rows)."""
    q = len(tt)
    X = np.arange(q, dtype=np.int64)[None, :]
    A = A[:, None]
    B = B[:, None]
    vals = tt[X] ^ tt[X ^ A] ^ tt[X ^ B] ^ tt[X ^ A ^ B]
    P = vals.shape[0]
    offs = (np.arange(P, dtype=np.int64) * q)[:, None]
    counts = np.bincount((vals + offs).ravel(), minlength=P * q).reshape(P, q)
    best = counts.max(axis=1)
    beta = counts.argmax(axis=1)
    return best, beta, counts


def _delta_block_counts(tt: np.ndarray, A: np.ndarray):
    q = len(tt)
    X = np.arange(q, dtype=np.int64)[None, :]
    vals = tt[X] ^ tt[X ^ A[:, None]]
    P = vals.shape[0]
    offs = (np.arange(P, dtype=np.int64) * q)[:, None]
    counts = np.bincount((vals + offs).ravel(), minlength=P * q).reshape(P, q)
    return counts.max(axis=1), counts.argmax(axis=1), counts


def delta(f: Poly, threads: int | None = None, histogram: bool = False) -> UniformityReport:
    """Nyberg's differential uniformity max_{a != 0, beta} #{x : D_a f(x) = beta}."""
    F = f.field
    q = F.q
    tt = truth_table(f)
    rows = max(1, BLOCK_CELLS // q)
    blocks = [np.arange(s, min(s + rows, q), dtype=np.int64) for s in range(1, q, rows)]

    def work(A):
        best, beta, counts = _delta_block_counts(tt, A)
        hist = _hist_of(counts) if histogram else None
        i = int(best.argmax())
        return int(best[i]), int(A[i]), int(beta[i]), hist

    top, wit, summary = -1, None, {} if histogram else None
    for val, a, b, hist in ordered_map(work, blocks, threads):
        if val > top:
            top, wit = val, (a, b)
        if hist is not None:
            _merge_hist(summary, hist)
    a, b = wit
    return UniformityReport(
        value=top,
        witnesses=[(F(a), None, F(b))],
        degenerate=top == q,
        histogram_summary=summary,
        order=1,
    )


def _hist_of(counts: np.ndarray) -> dict[int, int]:
    vals, freq = np.unique(counts, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, freq) if v}


def _merge_hist(into: dict[int, int], part: dict[int, int]) -> None:
    for k, v in part.items():
        into[k] = into.get(k, 0) + v


def _pair_chunks(q: int, max_pairs: int, first: int | None = None):
    """Unordered pairs a < b of nonzero elements, lexicographic, in chunks.

    Chunks start at ``first`` pairs and double up to ``max_pairs``, so a scan
    that stops early does not pay for a full block.
    """
    cap = min(first or max_pairs, max_pairs)
    A_parts, B_parts, size = [], [], 0
    for a in range(1, q - 1):
        lo = a + 1
        while lo < q:
            hi = min(q, lo + cap - size)
            A_parts.append(np.full(hi - lo, a, dtype=np.int64))
            B_parts.append(np.arange(lo, hi, dtype=np.int64))
            size += hi - lo
            lo = hi
            if size == cap:
                yield np.concatenate(A_parts), np.concatenate(B_parts)
                A_parts, B_parts, size = [], [], 0
                cap = min(2 * cap, max_pairs)
    if A_parts:
        yield np.concatenate(A_parts), np.concatenate(B_parts)


def _power_of_two(s: int) -> bool:
    return s & (s - 1) == 0


def _d2_terms(c) -> dict[int, list[tuple[int, int]]]:
    """Nonzero (s, c_{k+s}) contributions to the x^k coefficient of D^2 f."""
    m = len(c) - 1
    terms: dict[int, list[tuple[int, int]]] = {}
    for k in range(1, m):
        for s in range(1, m - k + 1):
            if _power_of_two(s):
                continue  # C_s vanishes
            i = k + s
            if c[i] and (i & k) == k:
                terms.setdefault(k, []).append((s, c[i]))
    return terms


def _never_constant(terms) -> bool:
    """True when some coefficient of D^2 f is nonzero for every pair.

    C_s with s = 3 * 2^i equals (a b (a + b))^(2^i), which is nonzero for
    distinct nonzero a, b; a lone term of that shape is such a coefficient.
    """
    for ts in terms.values():
        if len(ts) == 1:
            s = ts[0][0]
            while s % 2 == 0:
                s //= 2
            if s == 3:
                return True
    return False


def d2_degree_scan(f: Poly, threads: int | None = None):
    """Max over pairs of deg D^2 f, and the lex-first pair where D^2 f is constant.

    Returns (max_degree, degenerate_pair_or_None).  max_degree is 0 when
    every pair gives a constant.
    """
    F = f.field
    q = F.q
    c = f.c
    m = len(c) - 1
    if m < 3:
        return 0, (1, 2)
    terms = _d2_terms(c)
    if not terms:
        return 0, (1, 2)
    ks = sorted(terms, reverse=True)

    def work(chunk):
        A, B = chunk
        S = A ^ B
        cache: dict[int, np.ndarray] = {}

        def cs(s):
            if s not in cache:
                cache[s] = F.vpow(A, s) ^ F.vpow(B, s) ^ F.vpow(S, s)
            return cache[s]

        alive = np.ones(len(A), dtype=bool)  # every coefficient so far zero
        top = 0
        for k in ks:
            coef = np.zeros(len(A), dtype=np.int64)
            for s, ci in terms[k]:
                coef ^= F.vmul(cs(s), ci)
            nz = coef != 0
            if top == 0 and nz.any():
                top = k
            alive &= ~nz
            if not alive.any():
                break
        first = None
        if alive.any():
            i = int(np.flatnonzero(alive)[0])
            first = (int(A[i]), int(B[i]))
        return top, first

    top, degen = 0, None
    for t, first in ordered_map(work, _pair_chunks(q, 1 << 20), threads):
        top = max(top, t)
        if degen is None and first is not None:
            degen = first
    return top, degen


def delta2(
    f: Poly,
    threads: int | None = None,
    full: bool = False,
    histogram: bool = False,
) -> UniformityReport:
    """Exact second-order differential uniformity.

    ``full`` disables the degree bound and scans every pair; ``histogram``
    (implies full) also tallies how many (pair, beta) cells reach each count.
    """
    F = f.field
    q = F.q
    if q < 4:
        raise InvalidArgument("need at least two distinct nonzero elements")
    threads = default_threads() if threads is None else threads
    tt = truth_table(f)
    full = full or histogram
    bound = None
    if not full and 3 <= f.degree < q and _never_constant(terms := _d2_terms(f.c)):
        # no pair is degenerate; the top possible degree still bounds every count
        bound = max(terms)
    elif not full and f.degree < min(q, DEGREE_SCAN_MAX):
        top, degen = d2_degree_scan(f, threads)
        if degen is not None:
            a, b = degen
            beta = int(tt[0] ^ tt[a] ^ tt[b] ^ tt[a ^ b])
            return UniformityReport(q, [(F(a), F(b), F(beta))], degenerate=True)
        bound = top

    rows = max(1, BLOCK_CELLS // q)

    def work(chunk):
        A, B = chunk
        best, beta, counts = _pair_block_counts(tt, A, B)
        hist = _hist_of(counts) if histogram else None
        i = int(best.argmax())
        return int(best[i]), (int(A[i]), int(B[i]), int(beta[i])), hist

    chunks = _pair_chunks(q, rows, first=16 if bound is not None else None)
    top, wit, summary = -1, None, {} if histogram else None
    done = False
    while not done:
        batch = list(islice(chunks, max(1, threads)))
        if not batch:
            break
        for val, w, hist in ordered_map(work, batch, threads):
            if val > top:
                top, wit = val, w
            if hist is not None:
                _merge_hist(summary, hist)
            if bound is not None and top >= bound:
                done = True
                break
    a, b, beta = wit
    return UniformityReport(
        value=top,
        witnesses=[(F(a), F(b), F(beta))],
        degenerate=top == q,
        histogram_summary=summary,
    )


def delta2_for_pair(f: Poly, pair: DerivativePair) -> tuple[int, FieldElement]:
    """(max_beta count, smallest beta attaining it) for one pair."""
    _check_pair(f, pair)
    vals = second_derivative_values(truth_table(f), pair.a, pair.b)
    counts = np.bincount(vals, minlength=f.field.q)
    beta = int(counts.argmax())
    return int(counts[beta]), f.field(beta)


def monomial_table(F: FieldSpec, e: int) -> np.ndarray:
    """Values of x -> x^e on F (with 0^0 = 1)."""
    tt = F.vpow(F.all_elements, e)
    if e == 0:
        tt = np.ones(F.q, dtype=np.int64)
    return tt


def delta2_monomial(e: int, n: int, threads: int | None = None, field: FieldSpec | None = None) -> UniformityReport:
    """delta2 of x^e with alpha' fixed to 1 (valid for monomials by scaling x)."""
    F = field or field_new(n)
    q = F.q
    if not 0 <= e < q:
        raise InvalidArgument(f"exponent must lie in [0, {q})")
    tt = monomial_table(F, e)
    rows = max(1, BLOCK_CELLS // q)

    def work(A):
        best, beta, _ = _pair_block_counts(tt, A, np.ones_like(A))
        i = int(best.argmax())
        return int(best[i]), (int(A[i]), int(beta[i]))

    blocks = [np.arange(s, min(s + rows, q), dtype=np.int64) for s in range(2, q, rows)]
    top, wit = -1, None
    for val, w in ordered_map(work, blocks, threads):
        if val > top:
            top, wit = val, w
    a, beta = wit
    return UniformityReport(top, [(F(1), F(a), F(beta))], degenerate=top == q)
