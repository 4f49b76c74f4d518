import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from diffuni.errors import InvalidArgument
from diffuni.field import field_new
from diffuni.poly import DerivativePair, Poly, second_derivative
from diffuni.rng import random_poly
from diffuni.secdiff import (
    d2_degree_scan,
    delta,
    delta2,
    delta2_for_pair,
    delta2_monomial,
    solution_count,
)

# delta2 of the inversion map, from the full O(q^3) naive scan
INVERSION_D2 = {2: 4, 3: 8, 4: 4, 5: 4, 6: 8}
INVERSION_D1 = {2: 4, 3: 2, 4: 4, 5: 2, 6: 4}


@pytest.mark.parametrize("n", sorted(INVERSION_D2))
def test_inversion_against_naive(n):
    F = field_new(n)
    f = Poly.monomial(F, F.q - 2)
    tt = f.values().tolist()
    assert oracles.delta2_naive(tt) == INVERSION_D2[n]
    assert oracles.delta_naive(tt) == INVERSION_D1[n]
    assert delta2(f).value == INVERSION_D2[n]
    assert delta2(f, full=True).value == INVERSION_D2[n]
    assert delta2_monomial(F.q - 2, n).value == INVERSION_D2[n]
    assert delta(f).value == INVERSION_D1[n]


@given(st.sampled_from([3, 4]), st.integers(0, 10**6), st.integers(1, 12))
def test_random_polys_against_naive(n, seed, m):
    F = field_new(n)
    f = random_poly(F, m, seed, 0)
    tt = f.values().tolist()
    rep = delta2(f)
    assert rep.value == oracles.delta2_naive(tt)
    assert delta(f).value == oracles.delta_naive(tt)
    a, b, beta = rep.witness
    assert solution_count(f, DerivativePair(a, b), beta) == rep.value


@given(st.sampled_from([5, 6]), st.integers(0, 10**6), st.integers(3, 20))
def test_early_stop_matches_full_scan(n, seed, m):
    F = field_new(n)
    f = random_poly(F, m, seed, 1)
    fast, full = delta2(f), delta2(f, full=True)
    assert fast.value == full.value
    assert fast.degenerate == full.degenerate == (fast.value == F.q)


def test_witness_is_lex_first_for_degree_bound():
    F = field_new(5)
    f = random_poly(F, 9, 4, 0)
    rep = delta2(f)
    a, b, beta = rep.witness
    # no lexicographically earlier pair reaches the value
    for x in range(1, a.value + 1):
        for y in range(x + 1, F.q):
            if (x, y) >= (a.value, b.value):
                break
            assert delta2_for_pair(f, DerivativePair.of(F, x, y))[0] < rep.value


def test_quadratic_and_cubic_maps_are_degenerate():
    F = field_new(6)
    for coeffs in ([0, 0, 0, 1], [3, 1, 7], [0, 5, 0, 9]):
        f = Poly(F, coeffs)
        rep = delta2(f)
        assert rep.degenerate and rep.value == F.q
        a, b, beta = rep.witness
        assert second_derivative(f, DerivativePair(a, b)).is_constant()
        assert solution_count(f, DerivativePair(a, b), beta) == F.q


def test_gold_function_is_apn():
    for n in (3, 5, 7):
        F = field_new(n)
        assert delta(Poly.monomial(F, 3)).value == 2


def test_degree_scan_bounds_every_pair():
    F = field_new(5)
    for seed in range(5):
        f = random_poly(F, 13, seed, 0)
        top, degen = d2_degree_scan(f)
        degs = []
        for a in range(1, F.q):
            for b in range(a + 1, F.q):
                d2 = second_derivative(f, DerivativePair.of(F, a, b))
                degs.append(max(d2.degree, 0))
        assert top == max(degs)
        assert (degen is None) == (min(degs) > 0)


def test_histogram_counts_cells():
    F = field_new(4)
    f = Poly.monomial(F, 14)
    rep = delta2(f, histogram=True)
    pairs = (F.q - 1) * (F.q - 2) // 2
    total = sum(k * v for k, v in rep.histogram_summary.items())
    assert total == pairs * F.q
    assert max(rep.histogram_summary) == rep.value
    assert rep.to_json()["histogram"]


def test_monomial_witness_and_threads():
    F = field_new(8)
    r1 = delta2_monomial(254, 8, threads=1)
    r4 = delta2_monomial(254, 8, threads=4)
    assert r1.to_json() == r4.to_json()
    a, b, beta = r1.witness
    assert a == 1
    assert solution_count(Poly.monomial(F, 254), DerivativePair(a, b), beta) == 8


def test_thread_count_does_not_change_results():
    F = field_new(7)
    f = random_poly(F, 11, 9, 3)
    js = {str(delta2(f, threads=t).to_json()) for t in (1, 2, 8)}
    assert len(js) == 1


def test_report_json_shape():
    F = field_new(5)
    js = delta2(Poly.monomial(F, 30)).to_json()
    assert set(js) == {"delta2", "witness", "degenerate"}
    assert set(js["witness"]) == {"alpha", "alpha_prime", "beta"}
    assert set(delta(Poly.monomial(F, 30)).to_json()["witness"]) == {"alpha", "beta"}


def test_tiny_field_rejected():
    with pytest.raises(InvalidArgument):
        delta2_monomial(40, 4)
