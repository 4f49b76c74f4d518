"""Arithmetic in binary fields F_{2^n}.

Elements are n-bit ints interpreted as polynomials over F_2 modulo a
reduction polynomial.  The hot paths in the rest of the package work on
these raw ints (and numpy arrays of them); FieldElement is the thin typed
wrapper used at API boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator

import numpy as np

from .errors import ConstructionError, DivisionByZero, FieldMismatch, InvalidArgument

# Lexicographically smallest irreducible polynomial of each degree.
DEFAULT_REDUCTION = {
    2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x43, 7: 0x83, 8: 0x11B,
    9: 0x203, 10: 0x409, 11: 0x805, 12: 0x1009, 13: 0x201B, 14: 0x4021,
    15: 0x8003, 16: 0x1002B, 17: 0x20009, 18: 0x40009, 19: 0x80027,
    20: 0x100009, 21: 0x200005, 22: 0x400003, 23: 0x800021, 24: 0x100001B,
}

# Above this degree no log/exp tables are built; scalar and vector
# multiplication fall back to shift-and-xor.
TABLE_MAX_N = 20


def gf2_mod(a: int, b: int) -> int:
    """Remainder of a modulo b as polynomials over F_2."""
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def gf2_mulmod(a: int, b: int, mod: int) -> int:
    n = mod.bit_length() - 1
    top = 1 << n
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= mod
    return r


def gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, gf2_mod(a, b)
    return a


def _prime_factors(k: int) -> list[int]:
    out = []
    p = 2
    while p * p <= k:
        if k % p == 0:
            out.append(p)
            while k % p == 0:
                k //= p
        p += 1
    if k > 1:
        out.append(k)
    return out


def is_irreducible(poly: int) -> bool:
    """Irreducibility over F_2.

    Exhaustive trial division for degree <= 24, Rabin's test above that.
    """
    n = poly.bit_length() - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if not poly & 1:
        return False
    if n <= 24:
        for d in range(1, n // 2 + 1):
            for c in range(1 << d, 1 << (d + 1)):
                if gf2_mod(poly, c) == 0:
                    return False
        return True
    # Rabin: x^(2^n) = x mod P and gcd(x^(2^(n/p)) - x, P) = 1 for p | n.
    def frob(k: int) -> int:
        y = 2
        for _ in range(k):
            y = gf2_mulmod(y, y, poly)
        return y

    if frob(n) != 2:
        return False
    for p in _prime_factors(n):
        if gf2_gcd(poly, frob(n // p) ^ 2) != 1:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """F_{2^n} with a fixed reduction polynomial (bit n set, constant term 1)."""

    n: int
    reduction: int

    def __post_init__(self):
        n, red = self.n, self.reduction
        if not isinstance(n, int) or n < 2:
            raise ConstructionError(f"extension degree must be >= 2, got {n!r}")
        if red.bit_length() - 1 != n:
            raise ConstructionError(f"reduction {red:#x} does not have degree {n}")
        if not red & 1:
            raise ConstructionError(f"reduction {red:#x} has zero constant term")
        if not is_irreducible(red):
            raise ConstructionError(f"reduction {red:#x} is reducible over F_2")

    def __repr__(self) -> str:
        return f"FieldSpec(n={self.n}, reduction={self.reduction:#x})"

    @property
    def q(self) -> int:
        return 1 << self.n

    @property
    def mask(self) -> int:
        return (1 << self.n) - 1

    def __call__(self, value: int | str) -> FieldElement:
        if isinstance(value, str):
            value = parse_hex(value)
        return FieldElement(self, value)

    def elements(self) -> Iterator[FieldElement]:
        for v in range(self.q):
            yield FieldElement(self, v)

    # -- scalar arithmetic on raw ints -------------------------------------

    @cached_property
    def _tables(self):
        if self.n > TABLE_MAX_N:
            return None
        q = self.q
        g = self._primitive_element()
        exp = [0] * (2 * q)
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = gf2_mulmod(x, g, self.reduction)
        for i in range(q - 1, 2 * q):
            exp[i] = exp[i - (q - 1)]
        return exp, log

    def _primitive_element(self) -> int:
        order = self.q - 1
        factors = _prime_factors(order)
        for g in range(2, self.q):
            if all(self._slow_pow(g, order // p) != 1 for p in factors):
                return g
        return 1  # q == 2 never reaches here (n >= 2)

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = gf2_mulmod(r, a, self.reduction)
            a = gf2_mulmod(a, a, self.reduction)
            e >>= 1
        return r

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        t = self._tables
        if t is None:
            return gf2_mulmod(a, b, self.reduction)
        exp, log = t
        return exp[log[a] + log[b]]

    def sqr(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise InvalidArgument("negative exponent")
        if e == 0:
            return 1
        if a == 0:
            return 0
        t = self._tables
        if t is not None:
            exp, log = t
            return exp[(log[a] * e) % (self.q - 1)]
        return self._slow_pow(a, e)

    def inv(self, a: int) -> int:
        """a^(q-2), the multiplicative inverse for a != 0."""
        if a == 0:
            raise DivisionByZero("inverse of zero")
        t = self._tables
        if t is not None:
            exp, log = t
            return exp[(self.q - 1 - log[a]) % (self.q - 1)]
        return self._slow_pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def sqrt(self, a: int) -> int:
        # Frobenius is a bijection; its inverse is a -> a^(2^(n-1)).
        for _ in range(self.n - 1):
            a = self.mul(a, a)
        return a

    def trace_slow(self, a: int) -> int:
        """a + a^2 + ... + a^(2^(n-1)), evaluated literally."""
        s, y = 0, a
        for _ in range(self.n):
            s ^= y
            y = self.mul(y, y)
        return s

    @cached_property
    def trace_mask(self) -> int:
        """Bit j set iff Tr(x^j) = 1, so Tr(a) = parity(a & trace_mask)."""
        m = 0
        for j in range(self.n):
            t = self.trace_slow(1 << j)
            if t not in (0, 1):
                raise AssertionError("trace left the prime field")
            m |= t << j
        return m

    def trace(self, a: int) -> int:
        return (a & self.trace_mask).bit_count() & 1

    # -- Artin-Schreier ----------------------------------------------------

    @cached_property
    def _as_preimage(self):
        """z -> z^2 + z is F_2-linear with kernel {0, 1}; store one preimage
        per image point (exhaustive over the field)."""
        if self.n > TABLE_MAX_N:
            return None
        z = np.arange(self.q, dtype=np.int64)
        img = self.vmul(z, z) ^ z
        pre = np.full(self.q, -1, dtype=np.int64)
        # z and z^1 map to the same point; keep the even one.
        even = z[::2]
        pre[img[::2]] = even
        return pre

    @cached_property
    def _as_basis(self):
        """Row-reduced F_2 system for z^2 + z = c when no table is built."""
        rows = []  # (image, preimage) pairs kept in echelon form by pivot
        for j in range(1, self.n):
            img = self.mul(1 << j, 1 << j) ^ (1 << j)
            rows.append((img, 1 << j))
        basis: dict[int, tuple[int, int]] = {}
        for img, pre in rows:
            while img:
                p = img.bit_length() - 1
                if p not in basis:
                    basis[p] = (img, pre)
                    break
                bi, bp = basis[p]
                img ^= bi
                pre ^= bp
        return basis

    def solve_z2_plus_z(self, c: int) -> int | None:
        """One z with z^2 + z = c, or None when Tr(c) = 1."""
        if self.trace(c):
            return None
        pre = self._as_preimage
        if pre is not None:
            return int(pre[c])
        z = 0
        basis = self._as_basis
        while c:
            p = c.bit_length() - 1
            if p not in basis:
                raise AssertionError("trace-zero element outside the image")
            bi, bp = basis[p]
            c ^= bi
            z ^= bp
        return z

    # -- vectorized arithmetic on numpy int64 arrays -------------------------

    @cached_property
    def _np_tables(self):
        t = self._tables
        if t is None:
            return None
        exp, log = t
        return np.array(exp, dtype=np.int64), np.array(log, dtype=np.int64)

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        t = self._np_tables
        if t is not None:
            exp, log = t
            out = exp[log[a] + log[b]]
            return np.where((a == 0) | (b == 0), 0, out)
        a, b = np.broadcast_arrays(a, b)
        a = a.copy()
        r = np.zeros_like(a)
        top, red = 1 << self.n, self.reduction
        for i in range(self.n):
            r ^= np.where((b >> i) & 1, a, 0)
            a <<= 1
            a ^= np.where(a & top, red, 0)
        return r

    def vinv(self, a):
        """Elementwise inverse with 0 -> 0 (the inversion map)."""
        a = np.asarray(a, dtype=np.int64)
        t = self._np_tables
        if t is not None:
            exp, log = t
            out = exp[(self.q - 1 - log[a]) % (self.q - 1)]
            return np.where(a == 0, 0, out)
        r = np.ones_like(a)
        base = a.copy()
        e = self.q - 2
        while e:
            if e & 1:
                r = self.vmul(r, base)
            base = self.vmul(base, base)
            e >>= 1
        return np.where(a == 0, 0, r)

    def vpow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        t = self._np_tables
        if t is not None:
            exp, log = t
            out = exp[(log[a] * e) % (self.q - 1)]
            return np.where(a == 0, 0, out)
        r = np.ones_like(a)
        base = a.copy()
        while e:
            if e & 1:
                r = self.vmul(r, base)
            base = self.vmul(base, base)
            e >>= 1
        return r

    def vtrace(self, a):
        a = np.asarray(a, dtype=np.int64) & self.trace_mask
        # parity of the masked bits
        a ^= a >> 32
        a ^= a >> 16
        a ^= a >> 8
        a ^= a >> 4
        a ^= a >> 2
        a ^= a >> 1
        return a & 1

    @cached_property
    def all_elements(self):
        arr = np.arange(self.q, dtype=np.int64)
        arr.flags.writeable = False
        return arr

    # -- serialization ---------------------------------------------------

    def hex(self, a: int) -> str:
        return format(a, f"0{(self.n + 3) // 4}x")

    def to_json(self) -> dict:
        return {"n": self.n, "reduction_bits": format(self.reduction, "x")}

    @classmethod
    def from_json(cls, obj: dict) -> FieldSpec:
        return field_new(int(obj["n"]), parse_hex(obj["reduction_bits"]))


def parse_hex(s: str) -> int:
    s = s.strip().lower()
    if s.startswith("0x"):
        s = s[2:]
    if not s:
        raise InvalidArgument("empty hex string")
    try:
        return int(s, 16)
    except ValueError:
        raise InvalidArgument(f"malformed hex value {s!r}") from None


@lru_cache(maxsize=None)
def field_new(n: int, reduction: int | None = None) -> FieldSpec:
    """Build (and cache) F_{2^n}; the default modulus comes from the table."""
    if not isinstance(n, int) or n < 2:
        raise ConstructionError(f"extension degree must be >= 2, got {n!r}")
    if reduction is None:
        if n not in DEFAULT_REDUCTION:
            reduction = (1 << n) | 1
            while not is_irreducible(reduction):
                reduction += 2
        else:
            reduction = DEFAULT_REDUCTION[n]
    return FieldSpec(n, reduction)


class FieldElement:
    """An element of a specific FieldSpec."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value: int):
        if not 0 <= value < field.q:
            raise InvalidArgument(f"{value:#x} is not an element of {field!r}")
        self.field = field
        self.value = int(value)

    def _check(self, other) -> int:
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        return other.value

    def __add__(self, other):
        v = self._check(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, self.value ^ v)

    __sub__ = __add__
    __radd__ = __add__

    def __mul__(self, other):
        v = self._check(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, self.field.mul(self.value, v))

    def __truediv__(self, other):
        v = self._check(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, self.field.div(self.value, v))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(self.field, self.field.pow(self.value, e))

    def __neg__(self):
        return self

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def trace(self) -> int:
        return self.field.trace(self.value)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __lt__(self, other: FieldElement) -> bool:
        return self.value < self._check(other)

    def __hash__(self) -> int:
        return hash((self.field.n, self.field.reduction, self.value))

    def __repr__(self) -> str:
        return f"FieldElement({self.hex()}, n={self.field.n})"

    def hex(self) -> str:
        return self.field.hex(self.value)


def _same(a: FieldElement, b: FieldElement) -> FieldSpec:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field!r} vs {b.field!r}")
    return a.field


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return FieldElement(_same(a, b), a.value ^ b.value)


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    f = _same(a, b)
    return FieldElement(f, f.mul(a.value, b.value))


def fe_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def fe_trace(a: FieldElement) -> int:
    return a.field.trace(a.value)


def solve_artin_schreier(gamma: FieldElement, w: FieldElement) -> set[FieldElement]:
    """All y with y^2 + gamma*y = w.  Empty iff Tr(w / gamma^2) = 1."""
    F = _same(gamma, w)
    return {FieldElement(F, y) for y in as_roots(F, gamma.value, w.value)}


def as_roots(F: FieldSpec, gamma: int, w: int) -> tuple[int, ...]:
    """Raw-int form of solve_artin_schreier, sorted."""
    if gamma == 0:
        raise InvalidArgument("gamma must be nonzero")
    # y = gamma*z turns the equation into z^2 + z = w / gamma^2
    g2 = F.mul(gamma, gamma)
    z = F.solve_z2_plus_z(F.div(w, g2))
    if z is None:
        return ()
    y = F.mul(gamma, z)
    return tuple(sorted((y, y ^ gamma)))
