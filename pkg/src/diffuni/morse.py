"""Morse test for polynomials in characteristic 2.

g is Morse when
  (C) deg g is odd,
  (A) g' and the second Hasse derivative g^[2] have no common root,
  (B) distinct critical points have distinct critical values.
(B) is decided through C_cv(y) = Res_x(rad(g'), y + g(x)), whose roots are
the critical values: it must be squarefree.  With rad(g') monic this
resultant is the characteristic polynomial of multiplication by g on
F_q[x]/(rad g'), computed here by Hessenberg reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ._parallel import ordered_map
from .errors import InvalidArgument, UnsupportedResidue
from .field import FieldSpec, field_new
from .lmap import compute_L, d_of_m
from .poly import DerivativePair, Poly, radical, resultant_raw, squarefree
from .rng import random_poly


@dataclass(frozen=True)
class MorseVerdict:
    is_morse: bool
    failed_condition: str | None = None
    details: str = ""

    def __bool__(self) -> bool:
        return self.is_morse


def _charpoly(F: FieldSpec, M: list[list[int]]) -> Poly:
    """det(y I + M) over F (char 2, so this is the characteristic polynomial)."""
    N = len(M)
    H = [row[:] for row in M]
    mul, inv = F.mul, F.inv
    for c in range(N - 2):
        p = c + 1
        piv = next((i for i in range(p, N) if H[i][c]), None)
        if piv is None:
            continue
        if piv != p:
            H[piv], H[p] = H[p], H[piv]
            for row in H:
                row[piv], row[p] = row[p], row[piv]
        t_inv = inv(H[p][c])
        for i in range(p + 1, N):
            if not H[i][c]:
                continue
            u = mul(H[i][c], t_inv)
            # row_i -= u row_p ; col_p += u col_i keeps the matrix similar
            Hi, Hp = H[i], H[p]
            for j in range(N):
                Hi[j] ^= mul(u, Hp[j])
            for row in H:
                row[p] ^= mul(u, row[i])
    polys = [Poly.constant(F, 1)]
    y = Poly.x(F)
    for k in range(N):
        pk = (y + Poly.constant(F, H[k][k])) * polys[k]
        t = 1
        for i in range(k - 1, -1, -1):
            t = mul(t, H[i + 1][i])
            if not t:
                break
            coef = mul(H[i][k], t)
            if coef:
                pk = pk + polys[i].scale(coef)
        polys.append(pk)
    return polys[N]


def critical_value_poly(g: Poly) -> Poly:
    """C_cv(y) = Res_x(rad(g'), y + g(x)); its roots are the critical values of g."""
    F = g.field
    d1 = g.hasse(1)
    if d1.is_zero():
        raise InvalidArgument("g' vanishes identically")
    r = radical(d1)
    k = len(r.c) - 1
    if k == 0:
        return Poly.constant(F, 1)
    gm = g % r
    # column j holds x^j * g mod r
    cols = []
    cur = gm
    x = Poly.x(F)
    for _ in range(k):
        cols.append([cur.coeff(i) for i in range(k)])
        cur = (cur * x) % r
    M = [[cols[j][i] for j in range(k)] for i in range(k)]
    return _charpoly(F, M)


def is_morse(g: Poly) -> MorseVerdict:
    if g.is_constant():
        raise InvalidArgument("Morse test needs a nonconstant polynomial")
    deg = len(g.c) - 1
    if deg % 2 == 0:
        return MorseVerdict(False, "C", f"degree {deg} is even")
    d1, d2 = g.hasse(1), g.hasse(2)
    if resultant_raw(d1, d2) == 0:
        return MorseVerdict(False, "A", "g' and g^[2] share a root")
    cv = critical_value_poly(g)
    if not squarefree(cv):
        return MorseVerdict(False, "B", "two critical points share a critical value")
    return MorseVerdict(True, None, "conditions A, B, C hold")


# -- extension-field brute force ----------------------------------------------


@lru_cache(maxsize=None)
def embedding(F: FieldSpec, k: int) -> tuple[FieldSpec, tuple[int, ...]]:
    """F_{2^{nk}} together with the images of the power basis 1, x, .., x^(n-1) of F."""
    E = field_new(F.n * k)
    if k == 1:
        return E if E == F else F, tuple(1 << i for i in range(F.n))
    xs = E.all_elements
    acc = np.zeros_like(xs)
    for i in range(F.n + 1):
        if (F.reduction >> i) & 1:
            acc ^= E.vpow(xs, i)
    theta = int(np.flatnonzero(acc == 0)[0])
    return E, tuple(E.pow(theta, i) for i in range(F.n))


def _embed_poly(F: FieldSpec, k: int, f: Poly) -> Poly:
    E, basis = embedding(F, k)
    out = []
    for v in f.c:
        w = 0
        i = 0
        while v:
            if v & 1:
                w ^= basis[i]
            v >>= 1
            i += 1
        out.append(w)
    return Poly._make(E, out)


def is_morse_bruteforce(g: Poly, max_k: int = 4) -> MorseVerdict:
    """Decide A and B by locating the critical points in F_{q^k}, k <= max_k.

    For each k the critical points lying in F_{q^k} are found by scanning the
    whole extension; the scan stops at the first k holding every root of g'
    counted with multiplicity.  Raises if no such k <= max_k exists.
    """
    F = g.field
    if g.is_constant():
        raise InvalidArgument("Morse test needs a nonconstant polynomial")
    deg = len(g.c) - 1
    if deg % 2 == 0:
        return MorseVerdict(False, "C", f"degree {deg} is even")
    d1 = g.hasse(1)
    target = len(d1.c) - 1
    for k in range(1, max_k + 1):
        E, _ = embedding(F, k)
        ge, d1e, d2e = (_embed_poly(F, k, h) for h in (g, d1, g.hasse(2)))
        roots = np.flatnonzero(d1e.values() == 0).tolist() if target > 0 else []
        mults = []
        for t in roots:
            j = 1
            while d1e.hasse(j).eval_raw(t) == 0:
                j += 1
            mults.append(j)
        if sum(mults) != target:
            continue
        if any(d2e.eval_raw(t) == 0 for t in roots):
            return MorseVerdict(False, "A", f"common root of g' and g^[2] in F_(q^{k})")
        vals = [ge.eval_raw(t) for t in roots]
        if len(set(vals)) != len(vals):
            return MorseVerdict(False, "B", f"critical value collision in F_(q^{k})")
        return MorseVerdict(True, None, f"all critical points found in F_(q^{k})")
    raise InvalidArgument(f"g' does not split over F_(q^k) for any k <= {max_k}")


# -- sampling -------------------------------------------------------------------


@dataclass(frozen=True)
class NonMorseStats:
    samples: int
    nonmorse: int
    degree_drop: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.nonmorse + self.degree_drop, self.samples)

    def to_json(self) -> dict:
        fr = self.fraction
        return {
            "samples": self.samples,
            "nonmorse": self.nonmorse,
            "degree_drop": self.degree_drop,
            "fraction": f"{fr.numerator}/{fr.denominator}",
        }


def nonmorse_stats(
    m: int, n: int, pair: DerivativePair, samples: int, seed: int, threads: int | None = None
) -> NonMorseStats:
    """Classify L(f) for `samples` uniform f of degree <= m."""
    if m < 7 or m % 8 not in (0, 1, 2, 7):
        raise UnsupportedResidue(f"m = {m} is not >= 7 with m = 0, 1, 2, 7 mod 8")
    F = pair.field
    if F.n != n:
        raise InvalidArgument(f"pair lives in F_2^{F.n}, not F_2^{n}")
    d = d_of_m(m)

    def classify(i: int) -> str:
        f = random_poly(F, m, seed, i, exact_degree=False)
        g = compute_L(f, pair).g
        if len(g.c) - 1 != d:
            return "drop"
        return "ok" if is_morse(g).is_morse else "nonmorse"

    tags = list(ordered_map(classify, range(samples), threads))
    return NonMorseStats(samples, tags.count("nonmorse"), tags.count("drop"))


def nonmorse_fraction(
    m: int, n: int, pair: DerivativePair, samples: int, seed: int, threads: int | None = None
) -> Fraction:
    return nonmorse_stats(m, n, pair, samples, seed, threads).fraction
