"""Image of T_{a,a'}, its inversion, and the regularity hypothesis on L(f).

Writing T = S_g(S_a(x)) with S_c(x) = x(x+c), S_a(x) = x(x+a) and
g = a'^2 + a a', every equation T(x) = c unwinds into two Artin-Schreier
steps.  Solvability of both is the pair of trace conditions

    Tr(c / (a^2 + a a')^2) = 0,   Tr(c / (a'^2 + a a')^2) = 0,

so Im T is a codimension-2 subspace.  Theta(a, a') = (a^2 + a a', a'^2 + a a')
is a bijection on ordered pairs of distinct nonzero elements, which lets us
pick a pair for any prescribed codimension-2 subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import FieldMismatch, InsufficientDegree, InternalInvariantViolation, InvalidArgument
from .field import FieldElement, FieldSpec, as_roots, field_new
from .lmap import compute_L
from .poly import DerivativePair, Poly, T_raw, _check_pair


def theta_raw(F: FieldSpec, a: int, b: int) -> tuple[int, int]:
    ab = F.mul(a, b)
    return F.mul(a, a) ^ ab, F.mul(b, b) ^ ab


def theta(pair: DerivativePair) -> tuple[FieldElement, FieldElement]:
    F = pair.field
    u, v = theta_raw(F, pair.a, pair.b)
    return F(u), F(v)


def theta_inverse(F: FieldSpec, u: int, v: int) -> tuple[int, int]:
    """(a, a') with theta(a, a') = (u, v); u, v distinct and nonzero.

    u + v = (a + a')^2, so mu = sqrt(u + v) recovers the sum and a = u / mu.
    """
    if not u or not v or u == v:
        raise InvalidArgument("theta is only inverted on distinct nonzero pairs")
    mu = F.sqrt(u ^ v)
    a = F.div(u, mu)
    return a, a ^ mu


def trace_forms(F: FieldSpec, a: int, b: int) -> tuple[int, int]:
    """w1, w2 with Im T = {c : Tr(w1 c) = Tr(w2 c) = 0}."""
    u, v = theta_raw(F, a, b)
    return F.inv(F.mul(u, u)), F.inv(F.mul(v, v))


def in_image_T(c: FieldElement, pair: DerivativePair) -> bool:
    F = pair.field
    if c.field != F:
        raise FieldMismatch(f"{c.field!r} vs {F!r}")
    w1, w2 = trace_forms(F, pair.a, pair.b)
    return F.trace(F.mul(w1, c.value)) == 0 and F.trace(F.mul(w2, c.value)) == 0


def image_mask(pair: DerivativePair) -> np.ndarray:
    """Boolean table over F: membership in Im T by the trace test."""
    F = pair.field
    w1, w2 = trace_forms(F, pair.a, pair.b)
    xs = F.all_elements
    return (F.vtrace(F.vmul(xs, w1)) == 0) & (F.vtrace(F.vmul(xs, w2)) == 0)


def image_T_bruteforce(pair: DerivativePair) -> frozenset[int]:
    return frozenset(np.unique(T_raw(pair.field, pair.a, pair.b).values()).tolist())


def solve_T_raw(F: FieldSpec, a: int, b: int, c: int) -> tuple[int, ...]:
    gamma = F.mul(b, b) ^ F.mul(a, b)
    out = []
    for u in as_roots(F, gamma, c):
        out.extend(as_roots(F, a, u))
    return tuple(sorted(out))


def solve_T(pair: DerivativePair, c: FieldElement) -> set[FieldElement]:
    """Every x with T_{a,a'}(x) = c; there are 0 or 4 of them."""
    F = pair.field
    if c.field != F:
        raise FieldMismatch(f"{c.field!r} vs {F!r}")
    xs = solve_T_raw(F, pair.a, pair.b, c.value)
    if len(xs) not in (0, 4):
        raise InternalInvariantViolation(f"T(x) = c has {len(xs)} solutions")
    return {F(x) for x in xs}


def all_pairs(F: FieldSpec):
    """Unordered pairs a < a' of distinct nonzero elements."""
    for a in range(1, F.q):
        for b in range(a + 1, F.q):
            yield DerivativePair.of(F, a, b)


def distinct_images(n: int, field: FieldSpec | None = None) -> int:
    F = field or field_new(n)
    seen = set()
    for p in all_pairs(F):
        seen.add(np.flatnonzero(image_mask(p)).tobytes())
    return len(seen)


def subspace_count(n: int) -> int:
    """Number of codimension-2 subspaces of F_2^n."""
    return (2**n - 1) * (2 ** (n - 1) - 1) // 3


def representation_check(n: int, field: FieldSpec | None = None) -> bool:
    """Is every codimension-2 subspace of F_2^n some Im T_{a,a'}?"""
    if not 2 <= n <= 8:
        raise InvalidArgument("representation_check is exhaustive and limited to 2 <= n <= 8")
    return distinct_images(n, field) == subspace_count(n)


def regular_hypothesis_holds(f: Poly, pair: DerivativePair) -> bool:
    """deg L(f) = d(m) and b1/b0 lies in Im T_{a,a'}."""
    _check_pair(f, pair)
    res = compute_L(f, pair)
    if res.degree_drop:
        return False
    return in_image_T(res.b1_over_b0, pair)


# -- covering families ------------------------------------------------------


@dataclass(frozen=True)
class PairFamily:
    pairs: tuple[DerivativePair, ...]
    n: int

    def __post_init__(self):
        for p in self.pairs:
            if not isinstance(p, DerivativePair):
                raise InvalidArgument("family members must be DerivativePairs")
            if p.field.n != self.n:
                raise FieldMismatch(f"pair over F_2^{p.field.n} in a family over F_2^{self.n}")
        if len({p.field for p in self.pairs}) > 1:
            raise FieldMismatch("family pairs live in different fields")

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def to_json(self) -> list[dict]:
        return [p.to_json() for p in self.pairs]

    @classmethod
    def from_json(cls, F: FieldSpec, items: list[dict]) -> PairFamily:
        pairs = tuple(DerivativePair.of(F, int(d["alpha"], 16), int(d["alpha_prime"], 16)) for d in items)
        return cls(pairs, F.n)


def family_size(epsilon) -> int:
    """Smallest k with (3/4)^k < epsilon."""
    eps = Fraction(epsilon)
    if not 0 < eps <= 1:
        raise InvalidArgument("epsilon must lie in (0, 1]")
    k, p = 0, Fraction(1)
    while p >= eps:
        k += 1
        p *= Fraction(3, 4)
    return k


def dual_basis(F: FieldSpec) -> list[int]:
    """d_j with Tr(d_j x^l) = [j == l], so bit j of c equals Tr(d_j c)."""
    n = F.n
    # row i: the functional c -> Tr(x^i c), as a bitmask over coordinates l
    rows = []
    for i in range(n):
        r = 0
        for l in range(n):
            r |= F.trace(F.mul(1 << i, 1 << l)) << l
        rows.append(r)
    # invert the symmetric F_2 matrix M[i][l] = Tr(x^(i+l)) by Gauss-Jordan
    aug = [(rows[i], 1 << i) for i in range(n)]
    for col in range(n):
        piv = next(i for i in range(col, n) if (aug[i][0] >> col) & 1)
        aug[col], aug[piv] = aug[piv], aug[col]
        pr, pi = aug[col]
        for i in range(n):
            if i != col and (aug[i][0] >> col) & 1:
                aug[i] = (aug[i][0] ^ pr, aug[i][1] ^ pi)
    # row j of M^-1 gives d_j in the power basis
    return [aug[j][1] for j in range(n)]


def build_covering_family(n: int, epsilon, field: FieldSpec | None = None) -> PairFamily:
    """k pairs whose T-images are {xi_(2i-1) = xi_(2i) = 0} in power-basis coordinates.

    Coordinates are the bits of the element.  Pair i must satisfy
    1/theta_1^2 = d_(2i-2) and 1/theta_2^2 = d_(2i-1); theta is then inverted
    in closed form.
    """
    F = field or field_new(n)
    if F.n != n:
        raise InvalidArgument(f"field has degree {F.n}, expected {n}")
    k = family_size(epsilon)
    if n < 2 * k:
        raise InsufficientDegree(f"need n >= 2k = {2 * k}, got n = {n}")
    d = dual_basis(F)
    pairs = []
    for i in range(k):
        u = F.sqrt(F.inv(d[2 * i]))
        v = F.sqrt(F.inv(d[2 * i + 1]))
        a, b = theta_inverse(F, u, v)
        if theta_raw(F, a, b) != (u, v):
            raise InternalInvariantViolation("theta inverse failed")
        pairs.append(DerivativePair.of(F, a, b))
    return PairFamily(tuple(pairs), n)
