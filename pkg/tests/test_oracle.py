import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conftest import naive_count_fp
from dworkzeta.oracle import count_affine, count_projective, count_torus, ff_build
from dworkzeta.poly import HomogeneousPoly, fermat, parse_poly


def test_f9_uses_least_irreducible_modulus():
    table = ff_build(3, 2)
    assert table.modulus == (1, 0, 1)  # x^2 + 1
    assert table.q == 9 and table.order == 8
    assert sorted(int(x) for x in table.exp) == list(range(1, 9))


@pytest.mark.parametrize("p,s", [(3, 2), (5, 2), (3, 3), (7, 1)])
def test_field_tables_obey_axioms(p, s):
    T = ff_build(p, s)
    els = range(T.q)
    for a in els:
        assert T.power(a, T.q) == a  # Frobenius fixes F_q
    for a, b, c in itertools.islice(itertools.product(els, repeat=3), 500):
        assert T.mul(a, T.add(b, c)) == T.add(T.mul(a, b), T.mul(a, c))
        assert T.mul(a, b) == T.mul(b, a)


def test_table_cap():
    with pytest.raises(MemoryError):
        ff_build(5, 4, cap=100)
    with pytest.raises(ValueError):
        ff_build(5, 0)


def test_known_counts():
    assert count_projective(fermat(3, 3), ff_build(5, 1)) == 6
    assert count_projective(fermat(3, 3), ff_build(5, 2)) == 36
    assert count_projective(parse_poly("x1^2+x2^2+x3^2"), ff_build(3, 2)) == 10
    assert count_projective(fermat(4, 4), ff_build(13, 1)) == 128


def _naive_fq(f, T, kind):
    """Loop over F_q points using only the table's add and mul."""
    vals = range(T.q)
    total = 0
    for pt in itertools.product(vals, repeat=f.n):
        if kind == "torus" and 0 in pt:
            continue
        if kind == "proj":
            nz = [x for x in pt if x]
            if not nz or nz[0] != 1:
                continue
        acc = 0
        for exps, c in f.terms:
            term = c % T.p
            for x, e in zip(pt, exps):
                term = T.mul(term, T.power(x, e))
            acc = T.add(acc, term)
        total += acc == 0
    return total


poly_terms = st.dictionaries(
    st.sampled_from([(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1)]),
    st.integers(1, 6),
    min_size=1,
)


@settings(max_examples=25)
@given(poly_terms, st.sampled_from([(3, 1), (5, 1), (7, 1), (3, 2)]))
def test_counts_match_naive_loops(terms, field):
    f = HomogeneousPoly.from_dict(terms, n=3)
    T = ff_build(*field)
    assert count_projective(f, T) == _naive_fq(f, T, "proj")
    assert count_torus(f, T) == _naive_fq(f, T, "torus")
    assert count_affine(f, T) == _naive_fq(f, T, "affine")
    if field[1] == 1:
        assert count_projective(f, T) == naive_count_fp(f, field[0])


@settings(max_examples=25)
@given(poly_terms, st.sampled_from([(5, 1), (7, 1), (3, 2)]))
def test_inclusion_exclusion_over_supports(terms, field):
    f = HomogeneousPoly.from_dict(terms, n=3)
    T = ff_build(*field)
    proj = count_projective(f, T)
    by_support = sum(
        count_torus(f, T, support=S)
        for r in range(1, 4)
        for S in itertools.combinations(range(3), r)
    )
    assert by_support == (T.q - 1) * proj
    assert count_affine(f, T) == 1 + (T.q - 1) * proj


def test_parallel_scan_matches_serial():
    f = parse_poly("x1^4+x2^4+2*x3^4+x4^4+x1*x2*x3*x4", 4)
    T = ff_build(13, 1)
    assert count_projective(f, T, workers=3) == count_projective(f, T, workers=1)
    assert count_torus(f, T, workers=2) == count_torus(f, T)
