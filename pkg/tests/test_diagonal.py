from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import naive_count_fp
from dworkzeta.diagonal import (
    cubic_swap_P,
    cubic_swap_terms,
    fermat_quartic_P,
    h0_basis,
    h0_dimension,
    pochhammer_audit,
    quartic_eigenvalues,
    quartic_precision,
)
from dworkzeta.oracle import count_projective, ff_build
from dworkzeta.padic import PrecisionError, valuation
from dworkzeta.poly import fermat
from dworkzeta.zeta import verify_report


@pytest.mark.parametrize("n,d,size", [(4, 4, 21), (3, 3, 2), (5, 5, 204)])
def test_interior_basis_size(n, d, size):
    basis = h0_basis(n, d)
    assert len(basis) == h0_dimension(n, d) == size
    assert all(0 < x < d for v in basis for x in v[1:])


def test_quartic_precision_exceeds_short_estimate():
    # degree-21 coefficients up to C(21, k) 13^k need 22 digits, not 17
    assert quartic_precision(13) == 22
    with pytest.raises(PrecisionError):
        fermat_quartic_P(13, N=17)


def test_quartic_p13_frozen_numerator():
    z = fermat_quartic_P(13)
    assert z.numerator[:5] == [1, 55, 26, -49010, -621751]
    assert z.numerator[-1] == -247064529073450392704413
    assert z.counts == [(1, 128)]
    assert z.numerator_is_inverted
    assert verify_report(z).ok


def test_quartic_p5_second_count_matches_oracle():
    z = fermat_quartic_P(5)
    assert z.numerator[:4] == [1, 31, 250, -2050]
    assert z.predicted_counts(2)[1] == count_projective(fermat(4, 4), ff_build(5, 2))


def test_quartic_eigenvalue_valuations():
    # v0 = 1, 2, 3 carry p^0, p^1, p^2
    eig = quartic_eigenvalues(13, 6)
    for v, e in eig.items():
        assert valuation(e).value == v[0] - 1
    with pytest.raises(ValueError):
        quartic_eigenvalues(7, 4)


@pytest.mark.parametrize("p", [5, 11, 17, 23])
def test_cubic_swap_numerator(p):
    z = cubic_swap_P(p)
    assert z.numerator == [1, 0, p]
    assert z.checks["t1_valuation"] == 2 and z.checks["t2_valuation"] == 1
    assert z.predicted_counts(1)[0] == naive_count_fp(fermat(3, 3), p)


def test_cubic_swap_terms_are_units():
    sw = cubic_swap_terms(11, 4)
    assert sw.sum_a.residue % 11 and sw.sum_b.residue % 11
    with pytest.raises(ValueError):
        cubic_swap_terms(7, 4)


@settings(max_examples=20)
@given(st.sampled_from([5, 11]), st.tuples(*[st.integers(1, 40)] * 3))
def test_cubic_swap_independent_of_unit_coefficients(p, coeffs):
    if any(c % p == 0 for c in coeffs):
        with pytest.raises(ValueError):
            cubic_swap_P(p, coeffs)
        return
    z = cubic_swap_P(p, coeffs)  # raises on oracle mismatch
    assert z.numerator == [1, 0, p]


def test_pochhammer_terms_decay_at_linear_rate():
    p = 11
    for z, a in ((Fraction(2, 3), (2 * p - 1) // 3), (Fraction(1, 3), (p - 2) // 3)):
        rows = pochhammer_audit(p, z, a, 12)
        assert all(v >= bound for _, v, bound in rows)
        assert min(v - bound for _, v, bound in rows) == 0
