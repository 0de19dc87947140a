"""Dwork's splitting function, the Dwork character and the p-adic gamma function.

The splitting function is theta(x) = exp(pi (x - x^p)) = sum_n lambda_n x^n
with pi^(p-1) = -p.  Writing lambda_n = c_n pi^n, each lambda_n sits in a
single pi-slot: lambda_n = s_n * pi^(n mod (p-1)) where
s_n = c_n (-p)^floor(n/(p-1)) is a p-adic integer.  ``SplittingCoeffs``
stores the residues s_n.

The coefficients are built as a finite Moebius product of binomial series
(the Artin-Hasse route), which involves only p-integral binomials, instead
of the exponential recurrence, which divides by multiples of p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from .padic import PadicInt, PiElem, PrecisionError, _check_prime, teichmuller
from .series import binomial

__all__ = [
    "SplittingCoeffs",
    "splitting_coeffs",
    "mobius",
    "lambda_valuation_bound",
    "gamma_p_product",
    "gamma_p_roberts",
    "roberts_terms_needed",
    "gamma_p",
    "dwork_character",
    "GAMMA_PRODUCT_CAP",
]

GAMMA_PRODUCT_CAP = 5_000_000


def mobius(k: int) -> int:
    if k < 1:
        raise ValueError("mobius needs k >= 1")
    mu = 1
    f = 2
    while f * f <= k:
        if k % f == 0:
            k //= f
            if k % f == 0:
                return 0
            mu = -mu
        f += 1
    return -mu if k > 1 else mu


def lambda_valuation_bound(n: int, p: int) -> Fraction:
    """Lower bound n (p-1)/p^2 for the valuation of lambda_n."""
    return Fraction(n * (p - 1), p * p)


@dataclass(frozen=True)
class SplittingCoeffs:
    """Coefficients of exp(pi(x - x^p)) mod (p^N, x^(n_max+1)).

    ``scaled[n]`` is the residue of s_n, so lambda_n = s_n * pi^(n mod (p-1)).
    """

    p: int
    N: int
    n_max: int
    scaled: tuple

    def lam(self, n: int) -> PiElem:
        """lambda_n as a PiElem."""
        if n > self.n_max:
            raise PrecisionError(f"coefficient {n} beyond n_max = {self.n_max}")
        return PiElem.pi_power(n % (self.p - 1), self.p, self.N, coeff=self.scaled[n])

    @property
    def lambdas(self) -> list:
        return [self.lam(n) for n in range(self.n_max + 1)]

    def c(self, n: int) -> tuple:
        """c_n as (s, m) with c_n = s / (-p)^m and s a PadicInt."""
        if n > self.n_max:
            raise PrecisionError(f"coefficient {n} beyond n_max = {self.n_max}")
        return PadicInt(self.scaled[n], self.p, self.N), n // (self.p - 1)


def _mul_scaled(a: list, b: dict, p: int, m: int, n_max: int) -> list:
    """Product of two pi-graded series in the scaled representation.

    A product of slots pi^r1 * pi^r2 with r1 + r2 >= p-1 carries a factor -p.
    """
    e = p - 1
    out = [0] * (n_max + 1)
    nz = [(i, x) for i, x in enumerate(a) if x]
    for j, y in b.items():
        rj = j % e
        for i, x in nz:
            k = i + j
            if k > n_max:
                break
            v = x * y
            if i % e + rj >= e:
                v = -p * v
            out[k] += v
    return [x % m for x in out]


def _factor_series(k: int, exponent: Fraction, stride: int, p: int, N: int, n_max: int) -> dict:
    """Scaled coefficients of (1 - (pi x)^stride)^exponent, degree <= n_max."""
    m = p ** N
    e = p - 1
    out = {0: 1}
    b = Fraction(1)
    for i in range(1, n_max // stride + 1):
        b = b * (exponent - (i - 1)) / i
        deg = i * stride
        val = b * (-1) ** i * Fraction(-p) ** (deg // e)
        if val.denominator % p == 0:
            raise PrecisionError(f"non-integral binomial term at degree {deg} (k={k})")
        r = val.numerator * pow(val.denominator, -1, m) % m
        if r:
            out[deg] = r
    return out


@lru_cache(maxsize=64)
def splitting_coeffs(p: int, N: int, n_max: int) -> SplittingCoeffs:
    """Coefficients of exp(pi(x - x^p)) via the Artin-Hasse product.

    theta(x) = prod_{(k,p)=1} (1-(pi x)^k)^(-mu(k)/k) * (1-(pi x)^(k p^2))^(mu(k)/(k p^2)).
    """
    _check_prime(p)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    m = p ** N
    series = [1] + [0] * n_max
    for k in range(1, n_max + 1):
        if k % p == 0:
            continue
        mu = mobius(k)
        if mu == 0:
            continue
        f1 = _factor_series(k, Fraction(-mu, k), k, p, N, n_max)
        series = _mul_scaled(series, f1, p, m, n_max)
        if k * p * p <= n_max:
            f2 = _factor_series(k, Fraction(mu, k * p * p), k * p * p, p, N, n_max)
            series = _mul_scaled(series, f2, p, m, n_max)
    return SplittingCoeffs(p, N, n_max, tuple(series))


def gamma_p_product(m: int, p: int, N: int, cap: int = GAMMA_PRODUCT_CAP) -> PadicInt:
    """Morita's Gamma_p(m) = (-1)^m prod_{0<j<m, p not dividing j} j, mod p^N."""
    _check_prime(p)
    if m < 0:
        raise ValueError("gamma_p_product needs m >= 0")
    if m > cap:
        raise ValueError(
            f"m = {m} exceeds the product cap {cap}; use the Roberts series instead"
        )
    mod = p ** N
    acc = 1
    full_blocks = (m - 1) // p if m > 0 else 0
    for blk in range(full_blocks):
        acc = acc * (math.prod(range(blk * p + 1, blk * p + p)) % mod) % mod
    for j in range(full_blocks * p + 1, m):
        if j % p:
            acc = acc * j % mod
    return PadicInt((-1) ** m * acc, p, N)


def roberts_terms_needed(p: int, N: int, a: int) -> int:
    """Number of terms after which every further Roberts term vanishes mod p^N.

    Term k has valuation at least k + (a + kp)((p-1)/p^2 - 1/(p-1)), which is
    increasing in k for odd p.
    """
    drift = Fraction(p - 1, p * p) - Fraction(1, p - 1)

    def lb(k: int) -> Fraction:
        return k + (a + k * p) * drift

    K = 0
    while lb(K + 1) < N:
        K += 1
    return max(K, N + 2)


def gamma_p_roberts(
    z: PadicInt, a: int, sc: SplittingCoeffs, K_terms: Optional[int] = None
) -> PadicInt:
    """Gamma_p(p z - a) = sum_k c_{a+kp} p^k (z)_k, to the precision of ``z``."""
    p, N = z.p, z.N
    if sc.p != p:
        raise ValueError("splitting coefficients built for a different prime")
    if not 0 <= a < p:
        raise ValueError("a must lie in 0..p-1")
    K = roberts_terms_needed(p, N, a) if K_terms is None else K_terms
    if K < N:
        raise ValueError(f"K_terms = {K} is below the precision N = {N}")
    if a + K * p > sc.n_max:
        raise PrecisionError(
            f"splitting coefficients known through {sc.n_max}, need {a + K * p}"
        )
    j_max = (a + K) // (p - 1)
    if sc.N < N + j_max:
        raise PrecisionError(
            f"splitting coefficients at precision {sc.N}, need {N + j_max}"
        )
    mod = p ** N
    zr = z.residue
    poch = 1
    total = 0
    for k in range(K + 1):
        n = a + k * p
        mexp = n // (p - 1)
        j = mexp - k
        s = sc.scaled[n]
        if s % p ** j:
            raise PrecisionError(f"Roberts term {k} is not p-integral")
        term = (s // p ** j) * (-1) ** mexp
        total = (total + term * poch) % mod
        poch = poch * (zr + k) % mod
        if poch == 0:
            break
    return PadicInt(total, p, N)


def _sc_for_gamma(p: int, N: int) -> SplittingCoeffs:
    K = roberts_terms_needed(p, N, p - 1)
    j_max = (p - 1 + K) // (p - 1)
    return splitting_coeffs(p, N + j_max, p - 1 + K * p)


def gamma_p(z: Union[int, Fraction], p: int, N: int, method: str = "roberts") -> PadicInt:
    """Gamma_p at a p-integral rational z, by the Roberts series or Morita's product."""
    z = Fraction(z)
    if z.denominator % p == 0:
        raise ValueError(f"{z} is not p-integral")
    zr = PadicInt.from_rational(z, p, N)
    if method == "product":
        return gamma_p_product(zr.residue, p, N)
    if method != "roberts":
        raise ValueError(f"unknown method {method!r}")
    a = (-zr.residue) % p
    zz = PadicInt.from_rational((z + a) / p, p, N)
    return gamma_p_roberts(zz, a, _sc_for_gamma(p, N))


def dwork_character(x: int, sc: SplittingCoeffs) -> PiElem:
    """Theta_p(x) = theta(Teich(x)), a p-th root of unity mod p^N."""
    p, N = sc.p, sc.N
    need = -(-N * p * p // (p - 1))
    if sc.n_max < need:
        raise PrecisionError(f"n_max = {sc.n_max} too small; need >= {need}")
    m = p ** N
    t = teichmuller(x, p, N).residue
    out = [0] * (p - 1)
    tn = 1
    for n in range(sc.n_max + 1):
        out[n % (p - 1)] += sc.scaled[n] * tn
        tn = tn * t % m
    return PiElem(tuple(out), p, N)
