from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dworkzeta.dwork import (
    dwork_character,
    gamma_p,
    gamma_p_product,
    lambda_valuation_bound,
    mobius,
    splitting_coeffs,
)
from dworkzeta.padic import PadicInt, PiElem, PrecisionError, valuation


@pytest.mark.parametrize("p,N,n_max", [(3, 6, 40), (5, 5, 40), (7, 4, 30)])
def test_splitting_coeffs_match_exact_recurrence(p, N, n_max, splitting_oracle):
    sc = splitting_coeffs(p, N, n_max)
    exact = splitting_oracle(p, n_max)
    m = p ** N
    for n in range(n_max + 1):
        s, k = sc.c(n)
        target = exact[n] * Fraction(-p) ** k
        assert target.denominator % p != 0
        assert s.residue == target.numerator * pow(target.denominator, -1, m) % m


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_splitting_coeffs_respect_valuation_bound(p):
    sc = splitting_coeffs(p, 8, 60)
    for n in range(61):
        lam = sc.lam(n)
        if lam.coeffs != (0,) * (p - 1):
            assert valuation(lam).value >= lambda_valuation_bound(n, p)


def test_lambda_beyond_range_rejected():
    sc = splitting_coeffs(5, 3, 10)
    with pytest.raises(PrecisionError):
        sc.lam(11)


def test_gamma_product_examples():
    assert gamma_p_product(0, 5, 3).residue == 1
    assert gamma_p_product(1, 5, 3) == -1
    assert gamma_p_product(3, 5, 3).residue == 123  # -(1*2)
    with pytest.raises(ValueError):
        gamma_p_product(10, 5, 3, cap=5)


def test_mobius_values():
    assert [mobius(k) for k in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(1, 5), st.integers(0, 2000))
def test_gamma_roberts_matches_product(p, N, m):
    assert gamma_p(m, p, N) == gamma_p_product(m % p ** N, p, N)


@given(
    st.sampled_from([5, 7, 13]),
    st.integers(1, 5),
    st.fractions(min_value=-3, max_value=3, max_denominator=12),
)
def test_gamma_rational_methods_agree(p, N, z):
    if z.denominator % p == 0:
        with pytest.raises(ValueError):
            gamma_p(z, p, N)
        return
    assert gamma_p(z, p, N) == gamma_p(z, p, N, method="product")


@given(
    st.sampled_from([5, 7, 11]),
    st.fractions(min_value=-3, max_value=3, max_denominator=8),
)
def test_gamma_functional_equation_and_reflection(p, z):
    N = 4
    if z.denominator % p == 0:
        return
    g = gamma_p(z, p, N)
    assert g.residue % p != 0  # Gamma_p takes unit values
    zr = PadicInt.from_rational(z, p, N)
    shifted = gamma_p(z + 1, p, N)
    if zr.residue % p:
        assert shifted == -(zr * g)
    else:
        assert shifted == -g
    # Gamma_p(z) Gamma_p(1 - z) = (-1)^a0 with a0 in 1..p, a0 = z mod p
    a0 = zr.residue % p or p
    assert g * gamma_p(1 - z, p, N) == (-1) ** a0


@given(st.sampled_from([3, 5, 7]), st.integers(0, 20), st.integers(0, 20))
def test_dwork_character_is_additive(p, x, y):
    N = 4
    sc = splitting_coeffs(p, N, -(-N * p * p // (p - 1)) + p)
    tx, ty = dwork_character(x, sc), dwork_character(y, sc)
    assert tx * ty == dwork_character(x + y, sc)
    assert tx ** p == PiElem.one(p, N)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_dwork_character_is_nontrivial(p):
    N = 3
    sc = splitting_coeffs(p, N, -(-N * p * p // (p - 1)) + p)
    t1 = dwork_character(1, sc)
    assert dwork_character(0, sc) == PiElem.one(p, N)
    # Theta(1) = 1 + pi mod pi^2
    diff = t1 - PiElem.one(p, N) - PiElem.pi_power(1, p, N)
    assert diff.coeffs[0] % p == 0 and diff.coeffs[1] % p == 0
    with pytest.raises(PrecisionError):
        dwork_character(1, splitting_coeffs(p, N, 5))
