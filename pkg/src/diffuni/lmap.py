"""The associated polynomial g = L_{a,a'}(f) with g(T(x)) = D^2_{a,a'} f(x).

T(x) = x(x+a)(x+a')(x+a+a') is monic of degree 4, so matching
coefficients of g(T) against D^2 f from the top degree down determines g
one coefficient at a time.  The same peeling with S_a(x) = x(x+a) gives the
kernel witnesses of D_a.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DegreeDrop,
    FieldMismatch,
    InternalInvariantViolation,
    InvalidArgument,
    UnsupportedResidue,
)
from .field import FieldElement, FieldSpec
from .poly import DerivativePair, Poly, T_raw, _check_pair, derivative, second_derivative


def d_of_m(m: int) -> int:
    """Degree budget of L(f) for deg f = m: (m-4)/4, (m-5)/4, (m-6)/4, (m-3)/4 by m mod 4."""
    if m < 7:
        raise InvalidArgument(f"d(m) is defined for m >= 7, got {m}")
    return (m - (4, 5, 6, 3)[m % 4]) // 4


def delta0_of_m(m: int) -> int:
    if m < 7 or m % 8 not in (0, 1, 2, 7):
        raise UnsupportedResidue(f"m = {m} is not >= 7 with m = 0, 1, 2, 7 mod 8")
    return m - {0: 4, 1: 5, 2: 6, 7: 3}[m % 8]


@dataclass(frozen=True)
class LMapResult:
    g: Poly
    d_bound: int
    b0: FieldElement | None
    b1_over_b0: FieldElement | None

    @property
    def degree_drop(self) -> bool:
        return self.b0 is None

    def to_json(self) -> dict:
        return {
            "g": self.g.to_json(),
            "b0": None if self.b0 is None else self.b0.hex(),
            "b1_over_b0": None if self.b1_over_b0 is None else self.b1_over_b0.hex(),
        }


def decompose(f: Poly, inner: Poly) -> Poly | None:
    """h with h(inner) = f for monic inner, or None if no such h exists."""
    F = f.field
    k = len(inner.c) - 1
    if k < 1 or inner.lead != 1:
        raise InvalidArgument("inner polynomial must be monic of positive degree")
    if f.is_zero():
        return Poly(F)
    deg = len(f.c) - 1
    if deg % k:
        return None
    top = deg // k
    powers = [Poly.constant(F, 1)]
    for _ in range(top):
        powers.append(powers[-1] * inner)
    rem = f
    h = [0] * (top + 1)
    for j in range(top, -1, -1):
        b = rem.coeff(j * k)
        if b:
            h[j] = b
            rem = rem + powers[j].scale(b)
        if len(rem.c) - 1 >= j * k:
            # terms above the degree just peeled survived: not a composition
            return None
    if not rem.is_zero():
        return None
    return Poly(F, h)


def compute_L(f: Poly, pair: DerivativePair) -> LMapResult:
    _check_pair(f, pair)
    F = f.field
    D = second_derivative(f, pair)
    T = T_raw(F, pair.a, pair.b)
    g = decompose(D, T)
    if g is None:
        raise InternalInvariantViolation("D^2 f is not a polynomial in T")
    m = len(f.c) - 1
    if m >= 7:
        d = d_of_m(m)
        if len(g.c) - 1 > d:
            raise InternalInvariantViolation(f"deg L(f) = {len(g.c) - 1} exceeds d = {d}")
    else:
        d = max(len(g.c) - 1, 0)
    if len(g.c) - 1 != d:
        return LMapResult(g, d, None, None)
    b0 = g.c[d]
    b1 = g.coeff(d - 1)
    return LMapResult(g, d, F(b0), F(F.div(b1, b0)))


def _sym(F: FieldSpec, a: int, b: int, i0: int, i1: int, total: int) -> int:
    """sum_{i=i0}^{i1} a^i b^(total-i)."""
    s = 0
    for i in range(i0, i1 + 1):
        s ^= F.mul(F.pow(a, i), F.pow(b, total - i))
    return s


def b1_over_b0_formula(f: Poly, pair: DerivativePair) -> FieldElement:
    """b1/b0 from the closed-form table indexed by deg f mod 16.

    Coefficients are indexed from the top: a_j is the coefficient of x^(m-j).
    """
    _check_pair(f, pair)
    F = f.field
    m = len(f.c) - 1
    r = m % 16
    if m < 7 or r not in (0, 1, 2, 7, 8, 9, 10, 15):
        raise UnsupportedResidue(f"no closed form for m = {m} (m mod 16 = {r})")
    a, b = pair.a, pair.b
    mul = F.mul

    def A(j: int) -> int:
        return f.coeff(m - j)

    p1 = mul(mul(a, a), b) ^ mul(a, mul(b, b))           # a^2 a' + a a'^2
    p2 = mul(a, a) ^ mul(a, b) ^ mul(b, b)               # a^2 + a a' + a'^2
    p4 = mul(p2, p2)                                     # a^4 + a^2 a'^2 + a'^4
    divider = {7: 0, 15: 0, 0: 1, 8: 1, 1: 2, 9: 2, 2: 3, 10: 3}[r]
    j = divider
    num = mul(p1, A(j + 1)) ^ mul(p2, A(j + 2)) ^ A(j + 4)
    if r == 9:
        num ^= mul(_sym(F, a, b, 0, 6, 6), A(0))
    elif r == 10:
        num ^= mul(A(0), _sym(F, a, b, 1, 6, 7)) ^ mul(A(1), _sym(F, a, b, 0, 6, 6))
    den = A(divider)
    if den == 0:
        raise DegreeDrop(f"a_{divider} = 0, so deg L(f) < d")
    out = F.div(num, den)
    if r in (7, 8, 9, 10):
        out ^= p4
    return F(out)


def kernel_witness(f: Poly, alpha: FieldElement) -> Poly | None:
    """h with f = h(x(x+alpha)) when D_alpha f = 0, else None."""
    F = f.field
    if alpha.field != F:
        raise FieldMismatch(f"{alpha.field!r} vs {F!r}")
    if not derivative(f, alpha).is_zero():
        return None
    h = decompose(f, Poly(F, [0, alpha.value, 1]))
    if h is None:
        raise InternalInvariantViolation("D_alpha f = 0 but f is not a polynomial in S_alpha")
    return h


def double_kernel_witness(f: Poly, pair: DerivativePair) -> Poly | None:
    """h with f = h(T_{a,a'}(x)) when D_a f = D_a' f = 0, else None."""
    _check_pair(f, pair)
    if not derivative(f, pair.a).is_zero() or not derivative(f, pair.b).is_zero():
        return None
    h = decompose(f, T_raw(f.field, pair.a, pair.b))
    if h is None:
        raise InternalInvariantViolation("f is killed by D_a and D_a' but is not a polynomial in T")
    return h


def rank_over_field(F: FieldSpec, rows: list[list[int]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = max((len(r) for r in rows), default=0)
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if col < len(rows[i]) and rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        inv = F.inv(pr[col])
        pr[:] = [F.mul(inv, v) for v in pr]
        for i in range(len(rows)):
            if i != rank and col < len(rows[i]) and rows[i][col]:
                k = rows[i][col]
                ri = rows[i]
                for c in range(col, len(ri)):
                    ri[c] ^= F.mul(k, pr[c])
        rank += 1
    return rank


def rank_check_L(m: int, pair: DerivativePair, n: int | None = None) -> bool:
    """Does L map the monomials x^0..x^m onto a spanning set of F_q[x]_d?"""
    F = pair.field
    if n is not None and n != F.n:
        raise InvalidArgument(f"pair lives in F_2^{F.n}, not F_2^{n}")
    d = d_of_m(m)
    rows = []
    for e in range(m + 1):
        g = compute_L(Poly.monomial(F, e), pair).g
        if len(g.c) - 1 > d:
            return False
        rows.append([g.coeff(i) for i in range(d + 1)])
    return rank_over_field(F, rows) == d + 1
