"""Portable, seedable sample streams.

Every random object is drawn from its own Philox4x64-10 stream (the
counter-based generator of Salmon et al., as shipped in numpy), keyed by
the 128-bit integer ``seed * 2**64 + index``, i.e. key words
(k0, k1) = (index, seed).  Output words are the four lanes of the blocks
at counters 1, 2, 3, ... in order.  A coefficient in F_{2^n}
takes the n low bits of one raw 64-bit output; a nonzero coefficient is
``1 + raw % (2^n - 1)``.  Drawing a polynomial consumes outputs from the
constant term upward, so any implementation of Philox reproduces the same
samples.
"""

from __future__ import annotations

import numpy as np

from .field import FieldSpec
from .poly import DerivativePair, Poly


def stream(seed: int, index: int) -> np.random.Philox:
    if seed < 0 or index < 0:
        raise ValueError("seed and index must be non-negative")
    key = ((seed % (1 << 64)) << 64) | (index % (1 << 64))
    return np.random.Philox(key=key)


def raw_words(seed: int, index: int, count: int) -> list[int]:
    return [int(v) for v in stream(seed, index).random_raw(count)]


def random_poly(F: FieldSpec, m: int, seed: int, index: int, exact_degree: bool = True) -> Poly:
    """Uniform polynomial of degree m (or <= m when exact_degree is False)."""
    words = raw_words(seed, index, m + 1)
    c = [w & F.mask for w in words[:m]]
    top = words[m]
    c.append(1 + top % (F.q - 1) if exact_degree else top & F.mask)
    return Poly._make(F, c)


def random_pair(F: FieldSpec, seed: int, index: int) -> DerivativePair:
    """Uniform unordered pair of distinct nonzero elements, sorted."""
    gen = stream(seed, index)
    while True:
        a, b = (1 + int(w) % (F.q - 1) for w in gen.random_raw(2))
        if a != b:
            return DerivativePair.of(F, min(a, b), max(a, b))
