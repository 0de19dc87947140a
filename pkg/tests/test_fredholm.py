import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import naive_count_fp
from dworkzeta.fredholm import (
    all_subset_traces,
    counts_from_traces,
    direct_counts,
    fredholm_det,
    monomial_basis,
    required_precision,
    stability_audit,
    torus_trace_identity,
    truncation_degree,
    u_matrix,
)
from dworkzeta.oracle import count_torus, ff_build
from dworkzeta.padic import PrecisionError
from dworkzeta.poly import HomogeneousPoly, fermat, parse_poly


@pytest.mark.parametrize("n,d,M", [(3, 3, 2), (3, 1, 2), (4, 4, 2), (2, 5, 4)])
def test_monomial_basis_size_and_shape(n, d, M):
    basis = monomial_basis(n, d, M)
    assert len(basis) == sum(math.comb(d * v0 + n - 1, n - 1) for v0 in range(M + 1))
    assert all(d * v[0] == sum(v[1:]) for v in basis)
    assert basis == sorted(set(basis))


def test_monomial_basis_rejects_bad_input():
    with pytest.raises(ValueError):
        monomial_basis(0, 3, 2)


def test_precision_helpers():
    # N_1 of a curve in P^2 over F_5 is at most 31 < 5^3 / 2
    assert required_precision(5, 3, 1) == 4
    assert truncation_degree(5, 4) >= 6
    with pytest.raises(PrecisionError):
        direct_counts(fermat(3, 3), 5, 2, N=3)


@pytest.mark.parametrize(
    "text,p,expected",
    [
        ("x1+x2+x3", 5, [(1, 6), (2, 26)]),
        ("x1^2+x2^2+x3^2", 3, [(1, 4), (2, 10)]),
    ],
)
def test_direct_counts_known_curves(text, p, expected):
    assert direct_counts(parse_poly(text), p, 2).counts == expected


def test_direct_counts_nodal_and_twisted_cubics():
    f = parse_poly("x1^3+x2^3+x3^3+x1*x2*x3")
    assert direct_counts(f, 3, 1).counts == [(1, naive_count_fp(f, 3))]
    g = parse_poly("x1^3+2*x2^3+x3^3+x1*x2*x3")
    assert direct_counts(g, 5, 1).counts == [(1, 7)]


cubic_terms = [e for e in monomial_basis(3, 3, 1) if e[0] == 1]


@settings(max_examples=15)
@given(st.lists(st.integers(0, 4), min_size=len(cubic_terms), max_size=len(cubic_terms)))
def test_direct_counts_match_naive_loops(coeffs):
    terms = {e[1:]: c for e, c in zip(cubic_terms, coeffs) if c}
    if not terms:
        return
    f = HomogeneousPoly.from_dict(terms, n=3)
    assert direct_counts(f, 5, 1).counts == [(1, naive_count_fp(f, 5))]


def test_pi_route_matches_graded_route():
    f = parse_poly("x1^2+x2^2+x3^2")
    graded = direct_counts(f, 3, 1)
    via_pi = direct_counts(f, 3, 1, route="pi")
    assert graded.counts == via_pi.counts == [(1, 4)]
    for A, tr in via_pi.traces.items():
        assert tr[0].is_pi_free()


def test_counts_need_every_subset():
    U = u_matrix(fermat(3, 3), 5, 4)
    traces = all_subset_traces(U, 1)
    assert counts_from_traces(traces, 5, 3, 1) == 6
    traces.pop((1, 2, 3))
    with pytest.raises(ValueError):
        counts_from_traces(traces, 5, 3, 1)


def test_stability_and_torus_identity():
    f = fermat(3, 3)
    U = u_matrix(f, 5, 4)
    assert stability_audit(U)
    for s in (1, 2):
        assert torus_trace_identity(U, count_torus(f, ff_build(5, s)), s)
    assert not torus_trace_identity(U, count_torus(f, ff_build(5, 1)) + 1, 1)


def test_fredholm_exact_lift_matches_sympy_determinant():
    U = u_matrix(fermat(3, 3), 5, 2, M=1)
    m = U.modulus
    A = sympy.Matrix([[int(x) if x <= m // 2 else int(x) - m for x in row] for row in U.graded])
    T = sympy.Symbol("T")
    det = sympy.Poly((sympy.eye(U.dim) - T * A).det(), T)
    got = fredholm_det(U, U.dim, exact_lift=True)
    assert [int(c) for c in got.coeffs] == [int(det.coeff_monomial(T ** k)) for k in range(U.dim + 1)]


def test_fredholm_modular_route_agrees_with_exact_lift():
    U = u_matrix(fermat(3, 3), 5, 4)
    exact = fredholm_det(U, 4, exact_lift=True)
    modular = fredholm_det(U, 4)
    for a, b in zip(exact.coeffs, modular.coeffs):
        assert (a - b.residue) % b.modulus == 0
    with pytest.raises(PrecisionError):
        fredholm_det(U, 5 ** 4)
