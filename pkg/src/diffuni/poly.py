"""Dense univariate polynomials over F_{2^n}, lowest degree first."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import FieldMismatch, InternalInvariantViolation, InvalidArgument
from .field import FieldElement, FieldSpec, parse_hex

NEG_INF = float("-inf")


def _raw(F: FieldSpec, v) -> int:
    if isinstance(v, FieldElement):
        if v.field != F:
            raise FieldMismatch(f"{v.field!r} vs {F!r}")
        return v.value
    v = int(v)
    if not 0 <= v < F.q:
        raise InvalidArgument(f"{v:#x} is not an element of {F!r}")
    return v


def _trim(c: list[int]) -> tuple[int, ...]:
    k = len(c)
    while k and not c[k - 1]:
        k -= 1
    return tuple(c[:k])


def _submasks(i: int) -> Iterable[int]:
    s = i
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & i


class Poly:
    """Immutable polynomial; ``c[i]`` is the coefficient of x^i as a raw int."""

    __slots__ = ("field", "c")

    def __init__(self, field: FieldSpec, coeffs: Iterable = ()):
        self.field = field
        self.c = _trim([_raw(field, v) for v in coeffs])

    @classmethod
    def _make(cls, field: FieldSpec, c: list[int] | tuple[int, ...]) -> Poly:
        p = object.__new__(cls)
        p.field = field
        p.c = _trim(list(c))
        return p

    @classmethod
    def monomial(cls, field: FieldSpec, e: int, coeff: int = 1) -> Poly:
        return cls._make(field, [0] * e + [coeff])

    @classmethod
    def constant(cls, field: FieldSpec, v: int) -> Poly:
        return cls._make(field, [v])

    @classmethod
    def x(cls, field: FieldSpec) -> Poly:
        return cls._make(field, [0, 1])

    @classmethod
    def from_hex(cls, field: FieldSpec, items: Sequence[str]) -> Poly:
        return cls(field, [parse_hex(s) for s in items])

    # -- basic accessors -------------------------------------------------

    @property
    def degree(self) -> int | float:
        """Degree, or -inf for the zero polynomial."""
        return len(self.c) - 1 if self.c else NEG_INF

    @property
    def coeffs(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, v) for v in self.c)

    def coeff(self, i: int) -> int:
        return self.c[i] if 0 <= i < len(self.c) else 0

    @property
    def lead(self) -> int:
        return self.c[-1] if self.c else 0

    def is_zero(self) -> bool:
        return not self.c

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.c == other.c

    def __hash__(self) -> int:
        return hash((self.field.n, self.field.reduction, self.c))

    def __repr__(self) -> str:
        if not self.c:
            return "Poly(0)"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            v = self.c[i]
            if v:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                if v == 1 and mono:
                    terms.append(mono)
                else:
                    terms.append(f"{v:#x}" + ("*" + mono if mono else ""))
        return "Poly(" + " + ".join(terms) + ")"

    def _check(self, other: Poly) -> FieldSpec:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        return self.field

    # -- ring operations -------------------------------------------------

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] ^= v
        return Poly._make(self.field, out)

    __sub__ = __add__

    def scale(self, k: int) -> Poly:
        mul = self.field.mul
        return Poly._make(self.field, [mul(k, v) for v in self.c])

    def __mul__(self, other: Poly) -> Poly:
        F = self._check(other)
        a, b = self.c, other.c
        if not a or not b:
            return Poly._make(F, [])
        mul = F.mul
        out = [0] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u:
                for j, v in enumerate(b):
                    if v:
                        out[i + j] ^= mul(u, v)
        return Poly._make(F, out)

    def __pow__(self, e: int) -> Poly:
        r = Poly.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                r = r * base
            base = base * base
            e >>= 1
        return r

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        F = self._check(other)
        if not other.c:
            raise InvalidArgument("polynomial division by zero")
        rem = list(self.c)
        db = len(other.c) - 1
        inv_lead = F.inv(other.c[-1])
        if len(rem) - 1 < db:
            return Poly._make(F, []), self
        quot = [0] * (len(rem) - db)
        mul = F.mul
        for i in range(len(rem) - 1, db - 1, -1):
            t = rem[i]
            if not t:
                continue
            t = mul(t, inv_lead)
            quot[i - db] = t
            for j, v in enumerate(other.c):
                if v:
                    rem[i - db + j] ^= mul(t, v)
        return Poly._make(F, quot), Poly._make(F, rem[:db])

    def __floordiv__(self, other: Poly) -> Poly:
        return divmod(self, other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def monic(self) -> Poly:
        if not self.c:
            return self
        return self.scale(self.field.inv(self.c[-1]))

    def compose(self, inner: Poly) -> Poly:
        """self(inner(x))."""
        F = self._check(inner)
        r = Poly._make(F, [])
        for v in reversed(self.c):
            r = r * inner + Poly._make(F, [v])
        return r

    # -- evaluation --------------------------------------------------------

    def eval_raw(self, x: int) -> int:
        mul = self.field.mul
        r = 0
        for v in reversed(self.c):
            r = mul(r, x) ^ v
        return r

    def __call__(self, x: FieldElement) -> FieldElement:
        return FieldElement(self.field, self.eval_raw(_raw(self.field, x)))

    def values(self, xs=None) -> np.ndarray:
        """Vectorized Horner evaluation; defaults to every field element."""
        F = self.field
        xs = F.all_elements if xs is None else np.asarray(xs, dtype=np.int64)
        r = np.zeros_like(xs)
        for v in reversed(self.c):
            r = F.vmul(r, xs) ^ v
        return r

    # -- shifts and derivatives -------------------------------------------

    def shift(self, a: int) -> Poly:
        """f(x + a), expanded with binom(i, k) mod 2 = [k is a submask of i]."""
        a = _raw(self.field, a)
        if a == 0 or not self.c:
            return self
        F = self.field
        out = [0] * len(self.c)
        # powers of a on demand
        apow: dict[int, int] = {}
        for i, v in enumerate(self.c):
            if not v:
                continue
            for k in _submasks(i):
                e = i - k
                p = apow.get(e)
                if p is None:
                    p = apow[e] = F.pow(a, e)
                out[k] ^= F.mul(v, p)
        return Poly._make(F, out)

    def formal_derivative(self) -> Poly:
        return self.hasse(1)

    def hasse(self, k: int) -> Poly:
        """k-th Hasse derivative: coefficient of x^(i-k) is binom(i, k) c_i."""
        if k < 0:
            raise InvalidArgument("Hasse derivative order must be >= 0")
        if k == 0:
            return self
        out = [v if (i & k) == k else 0 for i, v in enumerate(self.c)][k:]
        return Poly._make(self.field, out)

    def to_json(self) -> list[str]:
        return [self.field.hex(v) for v in self.c]


@dataclass(frozen=True)
class DerivativePair:
    """Distinct nonzero directions (alpha, alpha') of a second derivative."""

    alpha: FieldElement
    alpha_prime: FieldElement

    def __post_init__(self):
        a, b = self.alpha, self.alpha_prime
        if not isinstance(a, FieldElement) or not isinstance(b, FieldElement):
            raise InvalidArgument("pair components must be field elements")
        if a.field != b.field:
            raise FieldMismatch(f"{a.field!r} vs {b.field!r}")
        if not a or not b:
            raise InvalidArgument("pair components must be nonzero")
        if a.value == b.value:
            raise InvalidArgument("pair components must be distinct")

    @classmethod
    def of(cls, field: FieldSpec, a: int, b: int) -> DerivativePair:
        return cls(FieldElement(field, a), FieldElement(field, b))

    @property
    def field(self) -> FieldSpec:
        return self.alpha.field

    @property
    def a(self) -> int:
        return self.alpha.value

    @property
    def b(self) -> int:
        return self.alpha_prime.value

    def sorted(self) -> DerivativePair:
        if self.a < self.b:
            return self
        return DerivativePair(self.alpha_prime, self.alpha)

    def to_json(self) -> dict:
        return {"alpha": self.alpha.hex(), "alpha_prime": self.alpha_prime.hex()}


def _check_pair(f: Poly, pair: DerivativePair) -> None:
    if not isinstance(pair, DerivativePair):
        raise InvalidArgument("expected a DerivativePair")
    if pair.field != f.field:
        raise FieldMismatch(f"{pair.field!r} vs {f.field!r}")


# -- module-level operations ---------------------------------------------------


def poly_eval(f: Poly, x: FieldElement) -> FieldElement:
    return f(x)


def poly_shift(f: Poly, a: FieldElement) -> Poly:
    return f.shift(a)


def derivative(f: Poly, alpha: FieldElement | int) -> Poly:
    """D_alpha f(x) = f(x + alpha) + f(x)."""
    a = _raw(f.field, alpha)
    if a == 0:
        raise InvalidArgument("derivative direction must be nonzero")
    return f.shift(a) + f


def second_derivative(f: Poly, pair: DerivativePair) -> Poly:
    """f(x) + f(x+a) + f(x+a') + f(x+a+a')."""
    _check_pair(f, pair)
    a, b = pair.a, pair.b
    return f + f.shift(a) + f.shift(b) + f.shift(a ^ b)


def hasse_derivative(f: Poly, k: int) -> Poly:
    return f.hasse(k)


def resultant(f: Poly, g: Poly) -> FieldElement:
    F = f._check(g)
    return FieldElement(F, resultant_raw(f, g))


def resultant_raw(f: Poly, g: Poly) -> int:
    """Res(f, g) via the Euclidean remainder chain.

    Conventions: Res(c, g) = c^deg g for a nonzero constant c (and 1 when
    g = 0); Res(f, 0) = 0 for nonconstant f.  Signs vanish in
    characteristic 2, so Res is symmetric.
    """
    F = f._check(g)
    if f.is_zero() and g.is_zero():
        raise InvalidArgument("resultant of two zero polynomials")
    res = 1
    a, b = f, g
    while True:
        if a.is_zero() or b.is_zero():
            other = b if a.is_zero() else a
            return res if other.is_constant() else 0
        if a.is_constant():
            return F.mul(res, F.pow(a.c[0], len(b.c) - 1))
        if b.is_constant():
            return F.mul(res, F.pow(b.c[0], len(a.c) - 1))
        if len(a.c) < len(b.c):
            a, b = b, a
        # Res(a, b) = lc(b)^(deg a - deg r) * Res(b, r),  r = a mod b
        r = a % b
        if r.is_zero():
            return 0
        res = F.mul(res, F.pow(b.c[-1], len(a.c) - len(r.c)))
        a, b = b, r


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd."""
    f._check(g)
    if f.is_zero() and g.is_zero():
        raise InvalidArgument("gcd of two zero polynomials")
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def sqrt_poly(f: Poly) -> Poly:
    """h with h^2 = f, for f whose odd coefficients all vanish."""
    F = f.field
    if any(f.c[1::2]):
        raise InvalidArgument("polynomial is not a square")
    return Poly._make(F, [F.sqrt(v) for v in f.c[0::2]])


def squarefree(f: Poly) -> bool:
    if f.is_zero():
        raise InvalidArgument("squarefree of the zero polynomial")
    if f.is_constant():
        return True
    d = f.formal_derivative()
    if d.is_zero():
        # over a perfect field of characteristic 2 this makes f a square
        return False
    return gcd(f, d).is_constant()


def radical(f: Poly) -> Poly:
    """Monic product of the distinct irreducible factors of f."""
    if f.is_zero():
        raise InvalidArgument("radical of the zero polynomial")
    f = f.monic()
    if f.is_constant():
        return f
    d = f.formal_derivative()
    if d.is_zero():
        return radical(sqrt_poly(f))
    c = gcd(f, d)
    w = f // c  # factors whose multiplicity is odd, each once
    if c.is_constant():
        return w
    rc = radical(c)
    return (w * rc // gcd(w, rc)).monic()


def roots_in_field(f: Poly) -> list[tuple[FieldElement, int]]:
    F = f.field
    return [(FieldElement(F, r), m) for r, m in roots_raw(f)]


def roots_raw(f: Poly) -> list[tuple[int, int]]:
    """Roots in F_q with multiplicities, by exhaustive scan then division."""
    if f.is_zero():
        raise InvalidArgument("roots of the zero polynomial")
    F = f.field
    vals = f.values()
    found = np.flatnonzero(vals == 0)
    out = []
    for r in found.tolist():
        lin = Poly._make(F, [r, 1])
        g, m = f, 0
        while True:
            qt, rem = divmod(g, lin)
            if not rem.is_zero():
                break
            g, m = qt, m + 1
        if m == 0:
            raise InternalInvariantViolation("scanned root does not divide")
        out.append((r, m))
    return out


def T_poly(pair: DerivativePair) -> Poly:
    """x(x+a)(x+a')(x+a+a') = x^4 + (a^2+a'^2+aa')x^2 + (a^2a'+aa'^2)x."""
    return T_raw(pair.field, pair.a, pair.b)


def T_raw(F: FieldSpec, a: int, b: int) -> Poly:
    mul = F.mul
    a2, b2, ab = mul(a, a), mul(b, b), mul(a, b)
    c2 = a2 ^ b2 ^ ab
    c1 = mul(a2, b) ^ mul(a, b2)
    return Poly._make(F, [0, c1, c2, 0, 1])


def S_poly(gamma: FieldElement) -> Poly:
    """x(x + gamma)."""
    if not gamma:
        raise InvalidArgument("gamma must be nonzero")
    return Poly._make(gamma.field, [0, gamma.value, 1])
