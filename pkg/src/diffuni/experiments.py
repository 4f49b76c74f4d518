"""Reproduction harness: density of delta2 = delta0, splitting values of beta,
the explicit Chebotarev bound, and the inversion-map computations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from ._parallel import ordered_map
from .errors import InvalidArgument
from .field import FieldElement, FieldSpec, field_new
from .lmap import delta0_of_m
from .poly import DerivativePair, Poly, T_raw, _check_pair, second_derivative
from .rng import random_poly
from .secdiff import delta2, delta2_monomial, second_derivative_values, truth_table

# -- density of delta2 = delta0 --------------------------------------------------


@dataclass(frozen=True)
class DensityStats:
    m: int
    n: int
    samples: int
    seed: int
    hits: int
    degenerate: int

    @property
    def misses(self) -> int:
        return self.samples - self.hits - self.degenerate

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.hits, self.samples)

    CSV_HEADER = "m,n,samples,seed,hits,degenerate,fraction"

    def csv_row(self) -> str:
        fr = self.fraction
        return f"{self.m},{self.n},{self.samples},{self.seed},{self.hits},{self.degenerate},{float(fr):.6f}"

    def to_json(self) -> dict:
        fr = self.fraction
        return {
            "m": self.m,
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "hits": self.hits,
            "degenerate": self.degenerate,
            "fraction": f"{fr.numerator}/{fr.denominator}",
        }


def density_experiment(
    m: int,
    n: int,
    samples: int,
    seed: int,
    threads: int | None = None,
    field: FieldSpec | None = None,
) -> DensityStats:
    """Count sampled f of degree m with delta2(f) = delta0(m).

    Sample i is random_poly(F, m, seed, i), so the statistic does not depend
    on how samples are spread over threads.
    """
    d0 = delta0_of_m(m)
    if samples < 1:
        raise InvalidArgument("samples must be positive")
    F = field or field_new(n)

    def one(i: int) -> str:
        rep = delta2(random_poly(F, m, seed, i), threads=1)
        if rep.degenerate:
            return "degenerate"
        return "hit" if rep.value == d0 else "miss"

    tags = list(ordered_map(one, range(samples), threads))
    return DensityStats(m, F.n, samples, seed, tags.count("hit"), tags.count("degenerate"))


def inversion_delta2_table(n_min: int, n_max: int, threads: int | None = None) -> dict[int, int]:
    if not 2 <= n_min <= n_max:
        raise InvalidArgument("need 2 <= n_min <= n_max")
    return {n: delta2_monomial(2**n - 2, n, threads).value for n in range(n_min, n_max + 1)}


# -- splitting values -------------------------------------------------------------


@dataclass(frozen=True)
class SplittingSearch:
    beta: FieldElement | None
    roots: tuple[FieldElement, ...]
    reason: str

    def to_json(self) -> dict:
        return {
            "beta": None if self.beta is None else self.beta.hex(),
            "roots": [r.hex() for r in self.roots],
            "reason": self.reason,
        }


def splitting_search(f: Poly, pair: DerivativePair) -> SplittingSearch:
    """Smallest beta such that D^2 f + beta has deg(D^2 f) distinct roots in F_q."""
    _check_pair(f, pair)
    F = f.field
    D = second_derivative(f, pair)
    if D.is_constant():
        return SplittingSearch(None, (), "constant")
    deg = len(D.c) - 1
    vals = second_derivative_values(truth_table(f), pair.a, pair.b)
    counts = np.bincount(vals, minlength=F.q)
    # deg distinct roots of a degree-deg polynomial are necessarily simple
    hit = np.flatnonzero(counts == deg)
    if len(hit) == 0:
        return SplittingSearch(None, (), "no splitting value")
    beta = int(hit[0])
    roots = tuple(F(int(x)) for x in np.flatnonzero(vals == beta))
    return SplittingSearch(F(beta), roots, "split")


def find_splitting_beta(f: Poly, pair: DerivativePair) -> FieldElement | None:
    return splitting_search(f, pair).beta


# -- explicit Chebotarev bound -------------------------------------------------------


def ceil_sqrt(x: int) -> int:
    r = isqrt(x)
    return r if r * r == x else r + 1


@dataclass(frozen=True)
class ChebotarevInput:
    q: int
    d_K: int
    d_LK: int
    g_K: int
    g_L: int
    s: int

    def __post_init__(self):
        if self.q < 2 or self.d_K < 1 or self.d_LK < 1:
            raise InvalidArgument("q >= 2, d_K >= 1 and d_LK >= 1 are required")
        if self.g_K < 0 or self.g_L < 0:
            raise InvalidArgument("genera are non-negative")
        if not 0 <= self.s <= self.d_LK:
            raise InvalidArgument("need 0 <= s <= d_LK")


def chebotarev_lower_bound(inp: ChebotarevInput) -> Fraction:
    """Lower bound on the number of degree-1 places with the prescribed Frobenius class.

    (s/d_LK) q - (2s/d_LK) ((d_LK + g_L) r2 + d_LK (2 g_K + 1) r4 + g_L + d_K d_LK)
    with r2 = ceil(q^(1/2)) and r4 = ceil(q^(1/4)); rounding the roots up keeps
    the result a valid lower bound.
    """
    r2 = ceil_sqrt(inp.q)
    r4 = ceil_sqrt(ceil_sqrt(inp.q))  # ceil(sqrt(ceil(y))) = ceil(sqrt(y)) for y >= 0
    err = (inp.d_LK + inp.g_L) * r2 + inp.d_LK * (2 * inp.g_K + 1) * r4 + inp.g_L + inp.d_K * inp.d_LK
    return Fraction(inp.s, inp.d_LK) * inp.q - Fraction(2 * inp.s, inp.d_LK) * err


def chebotarev_threshold(d_K: int, d_LK: int, g_K: int, g_L: int, s: int = 1, n_max: int = 256) -> int | None:
    """Smallest n with a positive bound at q = 2^n (None if none up to n_max)."""
    for n in range(1, n_max + 1):
        if chebotarev_lower_bound(ChebotarevInput(2**n, d_K, d_LK, g_K, g_L, s)) > 0:
            return n
    return None


# -- the inversion map and its quartic curve --------------------------------------


def _klein_table(F: FieldSpec) -> np.ndarray:
    """Boolean q x q table of (y^2+y)^2 + (y^2+y)(z^2+z) + (z^2+z+1)^2 = 0."""
    xs = F.all_elements
    Y = F.vmul(xs, xs) ^ xs
    Z = Y  # z^2 + z has the same table
    Y2 = F.vmul(Y, Y)
    W = Z ^ 1
    W2 = F.vmul(W, W)
    cross = F.vmul(Y[:, None], Z[None, :])
    return (Y2[:, None] ^ cross ^ W2[None, :]) == 0


def inversion_trace_mask(F: FieldSpec) -> np.ndarray:
    """alpha not in {0, 1}, alpha^2+alpha+1 != 0, and both trace conditions hold."""
    xs = F.all_elements
    den = F.vmul(xs, xs) ^ xs ^ 1
    ok = (xs > 1) & (den != 0)
    inv = F.vinv(den)
    t1 = F.vtrace(inv)
    t2 = F.vtrace(F.vmul(F.vmul(xs, xs), inv))
    return ok & (t1 == 0) & (t2 == 0)


@dataclass(frozen=True)
class CurveCounts:
    n: int
    count_D: int
    count_sols: int
    count_C: int           # via the inverse map on D \ Z
    count_C_direct: int    # fibre count over x
    points_at_infinity: int

    @property
    def projective_D(self) -> int:
        return self.count_D + self.points_at_infinity

    @property
    def serre_weil_bound(self) -> int:
        return 2**self.n + 1 - 3 * isqrt(2 ** (self.n + 2))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "count_D": self.count_D,
            "count_sols": self.count_sols,
            "count_C": self.count_C,
            "count_C_direct": self.count_C_direct,
            "projective_D": self.projective_D,
            "serre_weil_bound": self.serre_weil_bound,
        }


def curve_counts(n: int, field: FieldSpec | None = None) -> CurveCounts:
    F = field or field_new(n)
    if F.n < 2:
        raise InvalidArgument("need n >= 2")
    xs = F.all_elements
    D = _klein_table(F)
    count_D = int(D.sum())
    sols = int(inversion_trace_mask(F).sum())

    # inverse map D \ Z -> C, then check both surface equations
    P = F.vmul(xs, xs) ^ xs           # y^2 + y  (same table for z)
    ys, zs = np.nonzero(D)
    py, pz = P[ys], P[zs] ^ 1          # y^2+y, z^2+z+1
    in_Z = (py == 0) & (pz == 0)
    x = np.where(py != 0, F.vmul(pz, F.vinv(py)) ^ 1, F.vmul(py ^ 1, F.vinv(pz)))
    den = F.vmul(x, x) ^ x ^ 1
    on_S1 = F.vmul(py, den) == 1
    on_S2 = F.vmul(pz ^ 1, den) == F.vmul(x, x)
    count_C = int((~in_Z & on_S1 & on_S2).sum())

    # direct: over each x, y^2+y = 1/den and z^2+z = x^2/den have 0 or 2 roots each
    den = F.vmul(xs, xs) ^ xs ^ 1
    inv = F.vinv(den)
    ok = (den != 0) & (F.vtrace(inv) == 0) & (F.vtrace(F.vmul(F.vmul(xs, xs), inv)) == 0)
    count_C_direct = 4 * int(ok.sum())

    # points at infinity: y^4 + y^2 z^2 + z^4 = 0 with z = 1 (z = 0 forces y = 0)
    t2 = F.vmul(xs, xs)
    inf = int(((F.vmul(t2, t2) ^ t2 ^ 1) == 0).sum())
    return CurveCounts(F.n, count_D, sols, count_C, count_C_direct, inf)


def curve_point_counts(n: int) -> tuple[int, int]:
    c = curve_counts(n)
    return c.count_D, c.count_sols


def reduced_equation_check(n: int, field: FieldSpec | None = None) -> bool:
    """Away from {0, 1, a, a+1} the inverse-sum equation equals beta T_{a,1}(x) = a(a+1).

    For fixed (a, x) the left side fixes beta, while beta T(x) = a(a+1) has
    the single solution a(a+1)/T(x); equivalence for all beta is equality
    of the two.
    """
    F = field or field_new(n)
    if F.n < 3:
        raise InvalidArgument("need n >= 3")
    xs = F.all_elements
    inv = F.vinv(xs)
    for a in range(2, F.q):
        lhs = inv ^ inv[xs ^ a] ^ inv[xs ^ 1] ^ inv[xs ^ a ^ 1]
        T = T_raw(F, a, 1).values()
        keep = T != 0
        rhs = F.vmul(F.vinv(T[keep]), F.mul(a, a ^ 1))
        if not np.array_equal(lhs[keep], rhs):
            return False
    return True


def special_points_check(n: int, field: FieldSpec | None = None) -> bool:
    """x in {0, 1, a, a+1} solves the inverse-sum equation iff beta = (a^2+a+1)/(a(a+1))."""
    F = field or field_new(n)
    xs = F.all_elements
    inv = F.vinv(xs)
    for a in range(2, F.q):
        want = F.div(F.mul(a, a) ^ a ^ 1, F.mul(a, a ^ 1))
        for x in (0, 1, a, a ^ 1):
            if int(inv[x] ^ inv[x ^ a] ^ inv[x ^ 1] ^ inv[x ^ a ^ 1]) != want:
                return False
    return True
