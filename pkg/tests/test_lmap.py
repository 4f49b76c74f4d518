import pytest
from hypothesis import given, strategies as st

from diffuni.errors import DegreeDrop, InvalidArgument, UnsupportedResidue
from diffuni.field import field_new
from diffuni.lmap import (
    b1_over_b0_formula,
    compute_L,
    d_of_m,
    decompose,
    delta0_of_m,
    double_kernel_witness,
    kernel_witness,
    rank_check_L,
    rank_over_field,
)
from diffuni.poly import DerivativePair, Poly, T_raw, derivative, second_derivative
from diffuni.rng import random_pair, random_poly

RESIDUES = (0, 1, 2, 7, 8, 9, 10, 15)


def test_d_of_m_table():
    assert [d_of_m(m) for m in (7, 8, 9, 10, 11, 12, 16)] == [1, 1, 1, 1, 2, 2, 3]
    with pytest.raises(InvalidArgument):
        d_of_m(6)


def test_delta0_of_m():
    assert delta0_of_m(7) == 4 and delta0_of_m(8) == 4
    for m in range(7, 60):
        if m % 8 in (0, 1, 2, 7):
            assert delta0_of_m(m) == 4 * d_of_m(m)
        else:
            with pytest.raises(UnsupportedResidue):
                delta0_of_m(m)


@given(st.integers(4, 8), st.integers(0, 10**6), st.integers(0, 20))
def test_identity_and_degree_bound(n, seed, m):
    F = field_new(n)
    f = random_poly(F, m, seed, 0)
    pair = random_pair(F, seed, 1)
    res = compute_L(f, pair)
    T = T_raw(F, pair.a, pair.b)
    D = second_derivative(f, pair)
    assert res.g.compose(T) == D
    assert (res.g.values(T.values()) == D.values()).all()
    if m >= 7:
        assert res.d_bound == d_of_m(m)
        assert res.g.degree <= res.d_bound
    if not res.degree_drop:
        assert res.b0.value == res.g.lead


def test_uniqueness_spot_check():
    F = field_new(6)
    f = random_poly(F, 17, 2, 0)
    pair = random_pair(F, 2, 1)
    g = compute_L(f, pair).g
    T = T_raw(F, pair.a, pair.b)
    D = second_derivative(f, pair)
    for i in range(len(g.c)):
        c = list(g.c)
        c[i] ^= 1
        assert Poly(F, c).compose(T) != D


def test_small_examples():
    F = field_new(5)
    pair = DerivativePair.of(F, 3, 7)
    a, b = pair.a, pair.b
    c3 = F.mul(F.mul(a, b), a ^ b)
    res = compute_L(Poly.monomial(F, 3), pair)
    assert res.g == Poly.constant(F, c3)
    f = random_poly(F, 7, 11, 0)
    res = compute_L(f, pair)
    assert res.g.degree == 1
    assert res.b0.value == F.mul(c3, f.lead)


@pytest.mark.parametrize("r", RESIDUES)
def test_closed_form_matches_solver(r):
    F = field_new(8)
    m = r if r >= 7 else r + 16
    checked = 0
    for i in range(100):
        f = random_poly(F, m, 100 + r, i)
        pair = random_pair(F, 200 + r, i)
        res = compute_L(f, pair)
        try:
            v = b1_over_b0_formula(f, pair)
        except DegreeDrop:
            assert res.degree_drop
            continue
        assert not res.degree_drop
        assert v == res.b1_over_b0
        checked += 1
    assert checked >= 90


def test_closed_form_degree_drop_and_residues():
    F = field_new(6)
    pair = DerivativePair.of(F, 1, 2)
    # m = 16: the divider is a_1, the x^15 coefficient
    f = Poly(F, [1] * 15 + [0, 1])
    with pytest.raises(DegreeDrop):
        b1_over_b0_formula(f, pair)
    assert compute_L(f, pair).degree_drop
    with pytest.raises(UnsupportedResidue):
        b1_over_b0_formula(random_poly(F, 11, 0, 0), pair)


def test_kernel_witnesses():
    F = field_new(4)
    al = F(5)
    S = Poly(F, [0, 5, 1])
    assert kernel_witness(S, al) == Poly.x(F)
    assert kernel_witness(Poly.x(F), al) is None
    h = Poly(F, [3, 0, 7, 1])
    assert kernel_witness(h.compose(S), al) == h
    pair = DerivativePair.of(F, 5, 9)
    T = T_raw(F, 5, 9)
    assert double_kernel_witness(T, pair) == Poly.x(F)
    assert double_kernel_witness(S, pair) is None
    assert double_kernel_witness(h.compose(T), pair) == h


def _kernel_dim(F, m, dirs):
    rows = []
    for e in range(m + 1):
        mono = Poly.monomial(F, e)
        row = []
        for a in dirs:
            d = derivative(mono, a)
            row += [d.coeff(i) for i in range(m + 1)]
        rows.append(row)
    # kernel of x -> x M is (m+1) - rank(M)
    return m + 1 - rank_over_field(F, rows)


def test_kernel_dimensions_n3():
    F = field_new(3)
    for m in range(1, 13):
        for a in range(1, 8):
            assert _kernel_dim(F, m, [a]) == m // 2 + 1
        for a in range(1, 8):
            for b in range(a + 1, 8):
                assert _kernel_dim(F, m, [a, b]) == m // 4 + 1


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_surjectivity(n):
    F = field_new(n)
    for seed in range(3):
        pair = random_pair(F, seed, n)
        for m in (7, 8, 9, 10, 15, 16):
            assert rank_check_L(m, pair, n)


def test_linearity():
    F = field_new(7)
    pair = random_pair(F, 1, 1)
    f1, f2 = random_poly(F, 13, 1, 2), random_poly(F, 11, 1, 3)
    assert compute_L(f1 + f2, pair).g == compute_L(f1, pair).g + compute_L(f2, pair).g


def test_decompose_rejects_non_compositions():
    F = field_new(4)
    T = T_raw(F, 1, 2)
    assert decompose(Poly.monomial(F, 5), T) is None
    assert decompose(Poly.monomial(F, 4), T) is None
    assert decompose(Poly(F), T).is_zero()
    with pytest.raises(InvalidArgument):
        decompose(Poly.x(F), Poly.constant(F, 1))


def test_json():
    F = field_new(8)
    res = compute_L(Poly(F, [1, 2, 3, 4, 5, 6, 7, 1]), DerivativePair.of(F, 2, 3))
    js = res.to_json()
    assert set(js) == {"g", "b0", "b1_over_b0"}
    assert js["b0"] == F.hex(res.g.lead)
