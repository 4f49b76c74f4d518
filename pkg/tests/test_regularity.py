from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diffuni.errors import InsufficientDegree, InvalidArgument
from diffuni.field import field_new
from diffuni.lmap import compute_L
from diffuni.poly import DerivativePair, Poly, T_raw
from diffuni.regularity import (
    PairFamily,
    all_pairs,
    build_covering_family,
    distinct_images,
    dual_basis,
    family_size,
    image_mask,
    image_T_bruteforce,
    in_image_T,
    regular_hypothesis_holds,
    representation_check,
    solve_T,
    theta,
    theta_inverse,
    theta_raw,
)
from diffuni.rng import random_pair, random_poly


def _check_pair_exhaustively(p):
    F = p.field
    img = image_T_bruteforce(p)
    assert len(img) == F.q // 4
    assert set(np.flatnonzero(image_mask(p)).tolist()) == img
    T = T_raw(F, p.a, p.b)
    vals = T.values()
    for c in range(F.q):
        sols = solve_T(p, F(c))
        brute = set(np.flatnonzero(vals == c).tolist())
        assert {x.value for x in sols} == brute
        assert len(sols) in (0, 4)
        assert (len(sols) == 4) == in_image_T(F(c), p) == (c in img)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_all_pairs_small_fields(n):
    for p in all_pairs(field_new(n)):
        _check_pair_exhaustively(p)


@pytest.mark.parametrize("n", [6, 7, 8])
def test_sampled_pairs(n):
    F = field_new(n)
    for i in range(12):
        _check_pair_exhaustively(random_pair(F, 77, i))


def test_examples():
    F = field_new(6)
    p = DerivativePair.of(F, 5, 17)
    assert in_image_T(F(0), p)
    assert {x.value for x in solve_T(p, F(0))} == {0, 5, 17, 5 ^ 17}
    T = T_raw(F, 5, 17)
    for x in range(0, 64, 7):
        assert in_image_T(F(T.eval_raw(x)), p)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_theta_is_a_bijection(n):
    F = field_new(n)
    seen = set()
    for a in range(1, F.q):
        for b in range(1, F.q):
            if a == b:
                continue
            u, v = theta_raw(F, a, b)
            assert u and v and u != v
            assert theta_inverse(F, u, v) == (a, b)
            seen.add((u, v))
    assert len(seen) == (F.q - 1) * (F.q - 2)
    t = theta(DerivativePair.of(F, 1, 2))
    assert (t[0].value, t[1].value) == theta_raw(F, 1, 2)


def test_representation():
    assert distinct_images(3) == 7
    assert distinct_images(4) == 35
    for n in (3, 4, 5, 6):
        assert representation_check(n)
    with pytest.raises(InvalidArgument):
        representation_check(9)


def test_images_are_subspaces():
    F = field_new(5)
    for p in list(all_pairs(F))[::37]:
        img = image_T_bruteforce(p)
        assert 0 in img
        assert all(x ^ y in img for x in img for y in img)


def test_hypothesis_false_on_degree_drop():
    F = field_new(6)
    pair = DerivativePair.of(F, 1, 2)
    f = Poly(F, [1, 2, 3, 4, 5, 6, 7])  # degree 6 < 7: L(f) is constant
    f8 = Poly(F, [1, 2, 3, 4, 5, 6, 7, 0, 1])  # m = 8, divider a_1 = 0
    assert compute_L(f8, pair).degree_drop
    assert not regular_hypothesis_holds(f8, pair)
    assert compute_L(f, pair).g.is_constant()


def test_hypothesis_constructed_true():
    # for m = 7, b1/b0 = (p1 a1 + p2 a2 + a4)/a0 + p4; choose a4 to hit T(x0)
    F = field_new(8)
    pair = DerivativePair.of(F, 0x21, 0x5C)
    a, b = pair.a, pair.b
    mul = F.mul
    p1 = mul(mul(a, a), b) ^ mul(a, mul(b, b))
    p2 = mul(a, a) ^ mul(a, b) ^ mul(b, b)
    p4 = mul(p2, p2)
    T = T_raw(F, a, b)
    for x0 in (3, 77, 200):
        f = random_poly(F, 7, 9, x0)
        a0, a1, a2 = f.coeff(7), f.coeff(6), f.coeff(5)
        target = T.eval_raw(x0)
        a4 = mul(target ^ p4, a0) ^ mul(p1, a1) ^ mul(p2, a2)
        c = list(f.c)
        c[3] = a4
        g = Poly(F, c)
        assert compute_L(g, pair).b1_over_b0.value == target
        assert regular_hypothesis_holds(g, pair)


def test_hypothesis_rate_is_about_a_quarter():
    F = field_new(10)
    pair = DerivativePair.of(F, 0x1A3, 0x2F)
    hits = sum(regular_hypothesis_holds(random_poly(F, 7, 5, i), pair) for i in range(1000))
    assert abs(hits / 1000 - 0.25) <= 0.05


def test_family_size():
    assert family_size(Fraction(1, 4)) == 5
    assert family_size(Fraction(1, 2)) == 3
    assert family_size(1) == 1
    with pytest.raises(InvalidArgument):
        family_size(0)


def test_dual_basis():
    for n in (3, 8, 11):
        F = field_new(n)
        d = dual_basis(F)
        for j in range(n):
            for l in range(n):
                assert F.trace(F.mul(d[j], 1 << l)) == (j == l)


@pytest.mark.parametrize("n", [10, 11])
def test_covering_family_images(n):
    F = field_new(n)
    fam = build_covering_family(n, Fraction(1, 4))
    assert len(fam) == 5
    images = []
    for i, p in enumerate(fam):
        img = image_T_bruteforce(p)
        assert img == {c for c in range(F.q) if not (c >> (2 * i)) & 3}
        images.append(img)
    assert len({frozenset(s) for s in images}) == 5
    assert PairFamily.from_json(F, fam.to_json()) == fam


def test_covering_family_needs_room():
    with pytest.raises(InsufficientDegree):
        build_covering_family(9, Fraction(1, 4))


def test_covering_family_union_coverage():
    n = 10
    F = field_new(n)
    fam = build_covering_family(n, Fraction(1, 4))
    covered = 0
    for i in range(500):
        f = random_poly(F, 7, 31, i)
        covered += any(regular_hypothesis_holds(f, p) for p in fam)
    assert covered / 500 >= 1 - (3 / 4) ** 5 - 0.05
