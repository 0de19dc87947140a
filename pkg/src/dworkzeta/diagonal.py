"""Closed-form zeta numerators for diagonal hypersurfaces.

For a diagonal form sum a_i x_i^d the Frobenius operator is monomial on the
interior basis S = {Y^v : 0 < v_i < d, d | sum v_i}.  Its entries are products
of Gamma_p values (Roberts series), so the numerator follows without any
matrix truncation.  Two cases are covered:

* the Fermat quartic for p = 1 mod 4, where the operator is diagonal on S;
* the diagonal cubic for p = 2 mod 3, where it swaps (1,1,1) and (2,2,2).

Every result is gated by a brute-force count over F_p before it is returned.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .dwork import _sc_for_gamma, gamma_p, gamma_p_roberts
from .oracle import count_projective, ff_build
from .padic import PadicInt, PrecisionError, _check_prime, centered_lift, ord_p
from .poly import fermat
from .zeta import ZetaData, projective_denominator

__all__ = [
    "H0Basis",
    "OracleMismatchError",
    "h0_basis",
    "h0_dimension",
    "quartic_precision",
    "quartic_eigenvalues",
    "fermat_quartic_P",
    "CubicSwap",
    "cubic_swap_terms",
    "cubic_swap_P",
    "pochhammer_audit",
]


class OracleMismatchError(ValueError):
    """A closed-form numerator disagrees with the brute-force count."""


@dataclass(frozen=True)
class H0Basis:
    n: int
    d: int
    elements: Tuple[Tuple[int, ...], ...]  # (v0, v1, ..., vn) with v0 = sum(v_i) / d

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def h0_dimension(n: int, d: int) -> int:
    """((d-1)^n + (-1)^n (d-1)) / d."""
    return ((d - 1) ** n + (-1) ** n * (d - 1)) // d


def h0_basis(n: int, d: int) -> H0Basis:
    """Interior exponent vectors 0 < v_i < d with d | sum v_i, sorted."""
    if d < 2:
        raise ValueError("degree d must be at least 2")
    if n < 1:
        raise ValueError("need at least one variable")
    out = []
    for v in itertools.product(range(1, d), repeat=n):
        s = sum(v)
        if s % d == 0:
            out.append((s // d,) + v)
    return H0Basis(n, d, tuple(sorted(out)))


def _oracle_count(p: int, n: int, d: int, coeffs: Optional[Sequence[int]] = None) -> int:
    return count_projective(fermat(n, d, coeffs), ff_build(p, 1))


def _elementary(values: Sequence[int], mod: int) -> List[int]:
    """Coefficients of prod (1 - x T) mod ``mod``."""
    out = [1]
    for x in values:
        nxt = out + [0]
        for k in range(len(out), 0, -1):
            nxt[k] = (nxt[k] - x * out[k - 1]) % mod
        out = nxt
    return out


# Fermat quartic ------------------------------------------------------------


def quartic_precision(p: int, degree: int = 21) -> int:
    """Least N with p^N > 2 max_k C(degree, k) p^k, so centered lifts are exact."""
    bound = max(math.comb(degree, k) * p ** k for k in range(degree + 1))
    N = 1
    while p ** N <= 2 * bound:
        N += 1
    return N


def quartic_eigenvalues(p: int, N: int) -> Dict[Tuple[int, ...], PadicInt]:
    """Reciprocal roots (-1)^v0 p^(v0-1) prod Gamma_p(v_i/4), indexed by v in S, mod p^N."""
    _check_prime(p)
    if p % 4 != 1:
        raise ValueError(f"p = {p} is not 1 mod 4; the Fermat quartic operator is not diagonal")
    gam = {k: gamma_p(Fraction(k, 4), p, N) for k in (1, 2, 3)}
    out = {}
    for v in h0_basis(4, 4):
        v0, rest = v[0], v[1:]
        prod = PadicInt(1, p, N)
        for vi in rest:
            prod = prod * gam[vi]
        out[v] = prod * ((-1) ** v0 * p ** (v0 - 1))
    return out


def fermat_quartic_P(p: int, N: Optional[int] = None, check_oracle: bool = True) -> ZetaData:
    """Degree-21 numerator of x1^4 + x2^4 + x3^4 + x4^4 over F_p, p = 1 mod 4.

    Z(T) = 1 / (P(T)(1-T)(1-pT)(1-p^2 T)).
    """
    if N is None:
        N = quartic_precision(p)
    elif N < quartic_precision(p):
        raise PrecisionError(f"N = {N} cannot pin down degree-21 coefficients; need {quartic_precision(p)}")
    eig = quartic_eigenvalues(p, N)
    mod = p ** N
    coeffs_mod = _elementary([e.residue for e in eig.values()], mod)
    numerator = []
    for k, c in enumerate(coeffs_mod):
        a = centered_lift(PadicInt(c, p, N))
        if abs(a) > math.comb(21, k) * p ** k:
            raise PrecisionError(f"coefficient {k} = {a} violates the Weil bound")
        numerator.append(a)
    z = ZetaData(
        p=p,
        n=4,
        d=4,
        numerator=numerator,
        denominator_factors=projective_denominator(4),
        numerator_is_inverted=True,
        counts=[],
        method="diagonal-quartic",
    )
    z.extras["precision"] = N
    z.extras["eigenvalues_mod_pN"] = {
        "".join(map(str, v[1:])): centered_lift(e) for v, e in sorted(eig.items())
    }
    N1 = z.predicted_counts(1)[0]
    if check_oracle:
        actual = _oracle_count(p, 4, 4)
        if actual != N1:
            raise OracleMismatchError(f"predicted N_1 = {N1}, brute force gives {actual}")
        z.counts = [(1, actual)]
        z.checks["oracle_N1"] = True
    return z


# Diagonal cubic, p = 2 mod 3 -------------------------------------------------


@dataclass(frozen=True)
class CubicSwap:
    """Transition coefficients: U(1,1,1) = t1 (2,2,2), U(2,2,2) = t2 (1,1,1)."""

    p: int
    N: int
    sum_a: PadicInt  # Roberts sum with a = (2p-1)/3, z = 2/3
    sum_b: PadicInt  # Roberts sum with b = (p-2)/3, z = 1/3
    t1: PadicInt
    t2: PadicInt

    @property
    def alpha(self) -> PadicInt:
        """P(T) = det(1 - T U / p) = 1 - (t1 t2 / p^2) T^2 = 1 + alpha T^2."""
        # t1 carries p^2, so t1 t2 / p^2 is p-integral
        t1_red = PadicInt(self.t1.residue // (self.p * self.p), self.p, self.N)
        return -(t1_red * self.t2)


def cubic_swap_terms(p: int, N: int) -> CubicSwap:
    """Evaluate the two Pochhammer sums sum_k c_{a+kp} p^k (z)_k and the swap entries."""
    _check_prime(p)
    if p % 3 != 2:
        raise ValueError(f"p = {p} is not 2 mod 3; the cubic operator does not swap")
    # two extra digits absorb the p^2 prefactor of t1
    M = N + 2
    sc = _sc_for_gamma(p, M)
    a = (2 * p - 1) // 3
    b = (p - 2) // 3
    s_a = gamma_p_roberts(PadicInt.from_rational(Fraction(2, 3), p, M), a, sc)
    s_b = gamma_p_roberts(PadicInt.from_rational(Fraction(1, 3), p, M), b, sc)
    t1 = (s_a ** 3) * (p * p)
    t2 = -(s_b ** 3) * p
    return CubicSwap(p, M, s_a, s_b, t1, t2)


def cubic_swap_P(
    p: int,
    coeffs: Sequence[int] = (1, 1, 1),
    N: Optional[int] = None,
    check_oracle: bool = True,
) -> ZetaData:
    """Numerator 1 + alpha T^2 of a1 x1^3 + a2 x2^3 + a3 x3^3 over F_p, p = 2 mod 3.

    The transition sums do not involve the a_i: their Teichmuller factors
    enter as A_i^a on one side and A_i^b on the other, and A_i^(a+b) = A_i^(p-1) = 1.
    Coefficients divisible by p are rejected (the curve degenerates).
    """
    if len(coeffs) != 3:
        raise ValueError("a diagonal cubic curve needs three coefficients")
    if any(c % p == 0 for c in coeffs):
        raise ValueError("every coefficient must be a unit mod p")
    if N is None:
        # |alpha| <= 2p by the Weil bound
        N = 2
        while p ** N <= 4 * p:
            N += 1
    sw = cubic_swap_terms(p, N)
    alpha = centered_lift(sw.alpha.with_precision(N))
    if abs(alpha) > 2 * p:
        raise PrecisionError(f"alpha = {alpha} violates the Weil bound")
    z = ZetaData(
        p=p,
        n=3,
        d=3,
        numerator=[1, 0, alpha],
        denominator_factors=projective_denominator(3),
        numerator_is_inverted=False,
        counts=[],
        method="diagonal-cubic",
    )
    z.extras["precision"] = N
    z.extras["coefficients"] = [int(c) for c in coeffs]
    z.checks["alpha_divisible_by_p"] = alpha % p == 0
    z.checks["t1_valuation"] = ord_p(centered_lift(sw.t1), p) if sw.t1.residue else None
    z.checks["t2_valuation"] = ord_p(centered_lift(sw.t2), p) if sw.t2.residue else None
    if check_oracle:
        N1 = z.predicted_counts(1)[0]
        actual = _oracle_count(p, 3, 3, coeffs)
        if actual != N1:
            raise OracleMismatchError(f"predicted N_1 = {N1}, brute force gives {actual}")
        z.counts = [(1, actual)]
        z.checks["oracle_N1"] = True
    return z


# Convergence audit -----------------------------------------------------------


def _exact_splitting(p: int, n_max: int) -> List[Fraction]:
    """Coefficients of exp(X + X^p / p): (n+1) c_{n+1} = c_n + c_{n-p+1}."""
    c = [Fraction(1)]
    for n in range(n_max):
        nxt = c[n] + (c[n - p + 1] if n - p + 1 >= 0 else 0)
        c.append(nxt / (n + 1))
    return c


def pochhammer_audit(p: int, z: Fraction, a: int, K: int) -> List[Tuple[int, Fraction, Fraction]]:
    """Per term k: (k, exact valuation of c_{a+kp} p^k (z)_k, lower bound k (p-2)/(p-1)).

    The bound is the linear decay rate of the swap sums at q = p.
    """
    _check_prime(p)
    c = _exact_splitting(p, a + K * p)
    rate = Fraction(p - 2, p - 1)
    out = []
    poch = Fraction(1)
    for k in range(K + 1):
        term = c[a + k * p] * p ** k * poch
        v = Fraction(ord_p(term, p)) if term else Fraction(10 ** 9)
        out.append((k, v, k * rate))
        poch *= z + k
    return out
