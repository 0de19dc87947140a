from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from dworkzeta.padic import PadicInt, PrecisionError
from dworkzeta.series import (
    TruncSeries,
    exp_series,
    newton_polygon,
    poly_newton_polygon,
    series_ops,
    slope_root_count,
    traces_to_charpoly,
)

t = sympy.Symbol("t")


def _sympy_coeffs(expr, M):
    ser = sympy.series(expr, t, 0, M + 1).removeO()
    return [Fraction(str(ser.coeff(t, k))) for k in range(M + 1)]


def test_binomial_power_matches_sympy():
    M = 8
    f = TruncSeries.from_list([Fraction(1), Fraction(-1)], M, Fraction(0))
    got = f.binomial_power(Fraction(-3, 2))
    assert list(got.coeffs) == _sympy_coeffs((1 - t) ** sympy.Rational(-3, 2), M)
    g = TruncSeries.from_list([Fraction(1), Fraction(0), Fraction(2)], M, Fraction(0))
    assert list(g.binomial_power(Fraction(1, 3)).coeffs) == _sympy_coeffs(
        (1 + 2 * t ** 2) ** sympy.Rational(1, 3), M
    )


def test_exp_series_matches_sympy():
    M = 7
    f = TruncSeries.from_list([Fraction(0), Fraction(1), Fraction(1, 2)], M, Fraction(0))
    assert list(exp_series(f).coeffs) == _sympy_coeffs(sympy.exp(t + t ** 2 / 2), M)
    with pytest.raises(ValueError):
        exp_series(TruncSeries.from_list([1, 1], 3))


def test_series_ops_dispatch_and_errors():
    a = TruncSeries.from_list([1, 2, 3], 2)
    b = TruncSeries.from_list([0, 1, 0], 2)
    assert series_ops(a, b, "add").coeffs == (1, 3, 3)
    assert series_ops(a, b, "mul").coeffs == (0, 1, 2)
    with pytest.raises(ValueError):
        series_ops(a, b, "div")
    with pytest.raises(ValueError):
        series_ops(a, None, "pow")
    with pytest.raises(PrecisionError):
        a.truncate(5)


def test_padic_coefficients_supported():
    p, N = 5, 4
    one, x = PadicInt(1, p, N), PadicInt(5, p, N)
    f = TruncSeries.from_list([one, x], 6, PadicInt(0, p, N))
    inv = f.inverse()
    prod = f * inv
    assert prod[0] == 1 and all(c == 0 for c in prod.coeffs[1:])


def test_newton_polygon_example():
    np_ = newton_polygon([(0, 0), (1, 1), (2, 1), (3, 3)])
    assert np_.vertices == ((0, 0), (2, 1), (3, 3))
    assert np_.slopes == ((Fraction(1, 2), 2), (Fraction(2), 1))
    assert slope_root_count(np_, Fraction(1, 2)) == 2
    assert np_.value_at(Fraction(1)) == Fraction(1, 2)


def test_newton_polygon_skips_zero_coefficients():
    np_ = poly_newton_polygon([1, 0, 5], 5)
    assert np_.slopes == ((Fraction(1, 2), 2),)
    with pytest.raises(ValueError):
        newton_polygon([(0, None)])


def test_traces_to_charpoly_example():
    # A = diag(2, 3): det(1 - A T) = 1 - 5T + 6T^2
    traces = [2 ** s + 3 ** s for s in range(1, 4)]
    assert list(traces_to_charpoly(traces, 3).coeffs) == [1, -5, 6, 0]
    with pytest.raises(ValueError):
        traces_to_charpoly(traces, 4)


small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@given(st.lists(small, min_size=1, max_size=6), st.lists(small, min_size=1, max_size=6))
def test_series_ring_properties(xs, ys):
    M = 6
    a = TruncSeries.from_list(xs, M, Fraction(0))
    b = TruncSeries.from_list(ys, M, Fraction(0))
    assert a * b == b * a
    assert (a + b) - b == a
    assert (a * b).derivative() == a.derivative() * b.truncate(M - 1) + a.truncate(M - 1) * b.derivative()


@given(st.lists(small, min_size=1, max_size=5), small, small)
def test_binomial_power_laws(xs, e1, e2):
    M = 6
    f = TruncSeries.from_list([Fraction(1)] + [x for x in xs], M, Fraction(0))
    assert f.binomial_power(e1) * f.binomial_power(e2) == f.binomial_power(e1 + e2)
    assert f.binomial_power(3) == f * f * f
    assert f.binomial_power(-1) == f.inverse()


@given(st.lists(st.tuples(st.integers(0, 12), st.integers(0, 20)), min_size=1, max_size=12))
def test_newton_polygon_is_lower_convex(points):
    np_ = newton_polygon(points)
    slopes = [s for s, _ in np_.slopes]
    assert slopes == sorted(slopes) and len(set(slopes)) == len(slopes)
    for x, v in points:
        if np_.vertices[0][0] <= x <= np_.vertices[-1][0]:
            assert np_.value_at(Fraction(x)) <= v
    for vx, vy in np_.vertices:
        assert (vx, vy) in {(x, Fraction(v)) for x, v in points}


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=5))
def test_traces_to_charpoly_matches_roots(roots):
    S = len(roots)
    traces = [sum(r ** s for r in roots) for s in range(1, S + 1)]
    expected = [1]
    for r in roots:
        expected = [a - r * b for a, b in zip(expected + [0], [0] + expected)]
    assert list(traces_to_charpoly(traces, S).coeffs) == expected
