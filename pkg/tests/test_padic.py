from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dworkzeta.padic import (
    PadicInt,
    PiElem,
    PrecisionError,
    centered_lift,
    legendre_symbol,
    ring_ops,
    teichmuller,
    valuation,
)

PRIMES = [3, 5, 7, 11, 13]


def test_ring_ops_examples():
    a, b = PadicInt(100, 5, 3), PadicInt(30, 5, 3)
    assert ring_ops(a, b, "add").residue == 5
    pi = PiElem.pi_power(1, 5, 3)
    assert (pi * PiElem.pi_power(4, 5, 3)).coeffs == (0, -5 % 125, 0, 0)
    one = PiElem.one(5, 3)
    assert ((one + pi) * (one - pi)).coeffs == (1, 0, 124, 0)


def test_mismatched_moduli_rejected():
    with pytest.raises(ValueError):
        PadicInt(1, 5, 3) + PadicInt(1, 5, 4)
    with pytest.raises(ValueError):
        ring_ops(PadicInt(1, 5, 3), PadicInt(1, 7, 3), "mul")
    with pytest.raises(TypeError):
        ring_ops(PadicInt(1, 5, 3), PiElem.one(5, 3), "add")


def test_valuation_examples():
    assert valuation(PadicInt(250, 5, 5)) == (Fraction(3), False)
    assert valuation(PiElem.pi_power(1, 5, 4)).value == Fraction(1, 4)
    v = valuation(PadicInt(0, 5, 3))
    assert v.capped and v.value == 3 and str(v) == ">= 3"


def test_teichmuller_examples():
    assert teichmuller(2, 5, 3).residue == 57
    assert pow(57, 4, 125) == 1
    assert teichmuller(1, 13, 7).residue == 1
    assert teichmuller(0, 7, 5).residue == 0


def test_legendre_and_centered_lift_examples():
    assert legendre_symbol(2, 13) == -1
    assert legendre_symbol(1, 13) == 1
    assert legendre_symbol(13, 13) == 0
    assert centered_lift(PadicInt(124, 5, 3)) == -1
    assert centered_lift(PadicInt(57, 5, 3)) == 57
    assert centered_lift(PadicInt(63, 5, 3)) == -62


def test_p_two_rejected():
    with pytest.raises(ValueError):
        teichmuller(1, 2, 3)
    with pytest.raises(ValueError):
        teichmuller(1, 9, 3)


def test_from_rational_and_inverse():
    x = PadicInt.from_rational(Fraction(2, 3), 5, 4)
    assert (x * 3).residue == 2
    assert (x.inverse() * x) == 1
    with pytest.raises(PrecisionError):
        PadicInt.from_rational(Fraction(1, 5), 5, 4)
    with pytest.raises(ArithmeticError):
        PadicInt(5, 5, 3).inverse()


def test_pi_free_projection():
    x = PiElem.scalar(7, 5, 3)
    assert x.is_pi_free() and x.to_padic().residue == 7
    with pytest.raises(PrecisionError):
        PiElem.pi_power(1, 5, 3).to_padic()


@given(st.sampled_from(PRIMES), st.integers(1, 8), st.data())
def test_teichmuller_is_root_of_unity_and_multiplicative(p, N, data):
    a = data.draw(st.integers(0, p - 1))
    b = data.draw(st.integers(0, p - 1))
    ta, tb = teichmuller(a, p, N), teichmuller(b, p, N)
    assert ta ** p == ta
    assert ta.residue % p == a
    assert ta * tb == teichmuller(a * b % p, p, N)


@given(st.sampled_from(PRIMES), st.integers(1, 6), st.integers(), st.integers(), st.integers())
def test_padic_ring_matches_integers(p, N, x, y, z):
    m = p ** N
    a, b, c = PadicInt(x, p, N), PadicInt(y, p, N), PadicInt(z, p, N)
    assert (a + b).residue == (x + y) % m
    assert (a * b).residue == (x * y) % m
    assert (a - b).residue == (x - y) % m
    assert a * (b + c) == a * b + a * c


@given(st.sampled_from(PRIMES), st.integers(2, 6), st.integers(1, 10 ** 6), st.integers(1, 10 ** 6))
def test_valuation_additive_and_ultrametric(p, N, x, y):
    a, b = PadicInt(x, p, N), PadicInt(y, p, N)
    va, vb = valuation(a), valuation(b)
    prod = valuation(a * b)
    if not va.capped and not vb.capped and va.value + vb.value < N:
        assert prod.value == va.value + vb.value
    s = valuation(a + b)
    assert s.value >= min(va.value, vb.value)
    if va.value != vb.value:
        assert s.value == min(va.value, vb.value)


def _pi_elems(p, N):
    m = p ** N
    return st.lists(st.integers(0, m - 1), min_size=p - 1, max_size=p - 1).map(
        lambda c: PiElem(tuple(c), p, N)
    )


@given(st.sampled_from([3, 5, 7]).flatmap(lambda p: st.tuples(_pi_elems(p, 4), _pi_elems(p, 4), _pi_elems(p, 4))))
def test_pi_ring_axioms(abc):
    a, b, c = abc
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@given(st.sampled_from([3, 5, 7]), st.integers(0, 30))
def test_pi_power_reduction(p, k):
    N = 12
    x = PiElem.pi_power(k, p, N)
    # pi^k = (-p)^(k div (p-1)) pi^(k mod (p-1))
    expected = PiElem.pi_power(k % (p - 1), p, N, coeff=(-p) ** (k // (p - 1)))
    assert x == expected
    assert PiElem.pi_power(1, p, N) ** k == x


@given(st.sampled_from([5, 7, 13]), st.integers(1, 12).map(lambda a: a))
def test_conjugation_is_ring_automorphism(p, a):
    N = 5
    zeta = teichmuller(a % p or 1, p, N).residue
    x = PiElem(tuple(range(1, p)), p, N)
    y = PiElem.pi_power(2, p, N) + PiElem.scalar(3, p, N)
    assert (x * y).conjugate(zeta) == x.conjugate(zeta) * y.conjugate(zeta)
    assert PiElem.scalar(9, p, N).conjugate(zeta) == PiElem.scalar(9, p, N)
    with pytest.raises(ValueError):
        x.conjugate(2 if pow(2, p - 1, p ** N) != 1 else 3)


@given(st.sampled_from(PRIMES), st.integers(-1000, 1000))
def test_legendre_matches_squares(p, a):
    squares = {x * x % p for x in range(1, p)}
    expected = 0 if a % p == 0 else (1 if a % p in squares else -1)
    assert legendre_symbol(a, p) == expected


@given(st.sampled_from(PRIMES), st.integers(1, 6), st.integers())
def test_centered_lift_range(p, N, x):
    m = p ** N
    c = centered_lift(PadicInt(x, p, N))
    assert -m / 2 < c <= m / 2 and (c - x) % m == 0
