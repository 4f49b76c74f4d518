from fractions import Fraction
from math import isqrt

import pytest

import oracles
from diffuni.errors import InvalidArgument, UnsupportedResidue
from diffuni.experiments import (
    ChebotarevInput,
    DensityStats,
    ceil_sqrt,
    chebotarev_lower_bound,
    chebotarev_threshold,
    curve_counts,
    curve_point_counts,
    density_experiment,
    find_splitting_beta,
    inversion_delta2_table,
    reduced_equation_check,
    special_points_check,
    splitting_search,
)
from diffuni.field import field_new
from diffuni.lmap import compute_L
from diffuni.morse import is_morse
from diffuni.poly import DerivativePair, Poly, roots_in_field, second_derivative
from diffuni.regularity import regular_hypothesis_holds
from diffuni.rng import random_pair, random_poly
from diffuni.secdiff import delta2, solution_count


def test_density_small_field_spot_checks():
    st = density_experiment(7, 5, 30, seed=2)
    assert st.hits + st.misses + st.degenerate == 30
    assert 0 <= st.fraction <= 1
    F = field_new(5)
    hits = 0
    for i in range(10):
        tt = random_poly(F, 7, 2, i).values().tolist()
        hits += oracles.delta2_naive(tt) == 4
    assert hits == density_experiment(7, 5, 10, seed=2).hits


def test_density_determinism_and_csv():
    a = density_experiment(8, 6, 20, seed=5, threads=1)
    b = density_experiment(8, 6, 20, seed=5, threads=6)
    assert a == b
    assert DensityStats.CSV_HEADER == "m,n,samples,seed,hits,degenerate,fraction"
    row = a.csv_row().split(",")
    assert row[:6] == ["8", "6", "20", "5", str(a.hits), str(a.degenerate)]


def test_density_rejects_residue():
    with pytest.raises(UnsupportedResidue):
        density_experiment(12, 6, 5, seed=0)
    with pytest.raises(InvalidArgument):
        density_experiment(7, 6, 0, seed=0)


def test_density_degenerate_rare():
    st = density_experiment(9, 8, 40, seed=3)
    assert st.degenerate / st.samples <= 0.05


def test_inversion_table_small():
    table = inversion_delta2_table(2, 9)
    assert table == {2: 4, 3: 8, 4: 4, 5: 4, 6: 8, 7: 8, 8: 8, 9: 8}
    for n in (2, 3, 4, 5):
        F = field_new(n)
        assert delta2(Poly.monomial(F, F.q - 2), full=True).value == table[n]


def test_splitting_constant_case():
    F = field_new(5)
    s = splitting_search(Poly.monomial(F, 3), DerivativePair.of(F, 1, 2))
    assert s.beta is None and s.reason == "constant"
    assert find_splitting_beta(Poly.monomial(F, 3), DerivativePair.of(F, 1, 2)) is None


def test_splitting_found_values_split_completely():
    F = field_new(8)
    found = 0
    for i in range(40):
        f = random_poly(F, 9 + i % 8, 6, i)
        pair = random_pair(F, 6, 1000 + i)
        s = splitting_search(f, pair)
        if s.beta is None:
            continue
        found += 1
        D = second_derivative(f, pair)
        roots = roots_in_field(D + Poly.constant(F, s.beta.value))
        assert len(roots) == D.degree and all(m == 1 for _, m in roots)
        assert sorted(x.value for x in s.roots) == sorted(x.value for x, _ in roots)
        assert solution_count(f, pair, s.beta) == D.degree
        assert delta2(f).value >= D.degree
        # smallest such beta
        vals = second_derivative(f, pair).values()
        for b in range(s.beta.value):
            assert (vals == b).sum() != D.degree
    assert found > 0


def test_splitting_under_regularity_m7():
    F = field_new(10)
    pair = DerivativePair.of(F, 0x3, 0x155)
    got = 0
    for i in range(200):
        f = random_poly(F, 7, 8, i)
        if not (regular_hypothesis_holds(f, pair) and is_morse(compute_L(f, pair).g)):
            continue
        s = splitting_search(f, pair)
        assert s.beta is not None and len(s.roots) == 4
        got += 1
    assert got > 20


def test_chebotarev_examples():
    assert chebotarev_lower_bound(ChebotarevInput(2**10, 1, 3, 2, 5, 0)) == 0
    q = 2**20
    want = q - 2 * (ceil_sqrt(q) + 32 + 1)
    assert chebotarev_lower_bound(ChebotarevInput(q, 1, 1, 0, 0, 1)) == want
    assert ceil_sqrt(17) == 5 and ceil_sqrt(16) == 4
    with pytest.raises(InvalidArgument):
        ChebotarevInput(16, 1, 2, 0, 0, 3)


def test_chebotarev_monotone_once_positive():
    # on the q = 2^n grid; between consecutive integers the rounded roots jump
    for args in ((1, 1, 0, 0, 1), (2, 4, 1, 3, 1), (1, 24, 0, 9, 2), (3, 96, 2, 40, 7)):
        prev = None
        for q in (2**n for n in range(1, 80)):
            b = chebotarev_lower_bound(ChebotarevInput(q, *args))
            if prev is not None and prev > 0:
                assert b >= prev
            prev = b


def test_chebotarev_threshold_degree_one():
    # d = 1: d_LK is 1 or 4; genera zero, d_K = 1
    assert chebotarev_threshold(1, 1, 0, 0) == 4
    assert chebotarev_threshold(1, 4, 0, 0) == 8
    assert chebotarev_threshold(1, 1, 0, 0, s=0, n_max=30) is None


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_curve_counts_brute_force(n):
    F = field_new(n)
    q = F.q
    red = F.reduction
    m = lambda a, b: oracles.mul(a, b, red, n)  # noqa: E731
    sqp = [m(y, y) ^ y for y in range(q)]
    D = 0
    for y in range(q):
        for z in range(q):
            u, v = sqp[y], sqp[z]
            D += m(u, u) ^ m(u, v) ^ m(v ^ 1, v ^ 1) == 0
    sols = 0
    for a in range(2, q):
        den = m(a, a) ^ a ^ 1
        if den == 0:
            continue
        inv = oracles.inverse(den, red, n)
        sols += oracles.trace(inv, red, n) == 0 and oracles.trace(m(m(a, a), inv), red, n) == 0
    c = curve_counts(n)
    assert (c.count_D, c.count_sols) == (D, sols) == curve_point_counts(n)
    assert c.count_C == c.count_C_direct == 4 * sols
    assert c.points_at_infinity == 0


def test_curve_even_n_and_bounds():
    c = curve_counts(6)
    assert c.points_at_infinity == 2
    for n in (7, 9, 11):
        c = curve_counts(n)
        assert c.projective_D >= c.serre_weil_bound == 2**n + 1 - 3 * isqrt(2 ** (n + 2))
        assert c.count_sols >= 15


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_reduced_equation(n):
    assert reduced_equation_check(n)
    assert special_points_check(n)


def test_even_n_subfield_solutions():
    # elements of the half-size subfield satisfy both trace conditions
    from diffuni.experiments import inversion_trace_mask

    F = field_new(8)
    mask = inversion_trace_mask(F)
    sub = [x for x in range(F.q) if F.pow(x, 16) == x]
    for x in sub:
        if x > 1 and F.mul(x, x) ^ x ^ 1:
            assert mask[x]
