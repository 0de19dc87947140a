"""Zeta functions from point counts, and their verification.

Z(T) = exp(sum_s N_s T^s / s) is represented as

    Z(T) = P(T)^(+1 or -1) / prod_j (1 - p^j T)^(c_j)

with P an integer polynomial, P(0) = 1.  ``numerator_is_inverted`` records the
-1 exponent (projective hypersurfaces in an even number of variables).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .series import TruncSeries, exp_series, poly_newton_polygon

__all__ = [
    "ZetaData",
    "ZetaFitError",
    "projective_denominator",
    "expand_factors",
    "poly_mul",
    "power_sums",
    "predicted_counts",
    "zeta_fit",
    "VerifyReport",
    "verify_report",
    "reciprocal_roots",
]


class ZetaFitError(ValueError):
    """Counts are inconsistent with, or insufficient for, the requested shape."""


def poly_mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def expand_factors(factors: Sequence[Tuple[int, int]], p: int) -> List[int]:
    """prod (1 - p^j T)^c for c >= 0, as an integer coefficient list."""
    out = [1]
    for c, j in factors:
        if c < 0:
            raise ValueError("factor exponents must be nonnegative")
        for _ in range(c):
            out = poly_mul(out, [1, -(p ** j)])
    return out


def projective_denominator(n: int) -> List[Tuple[int, int]]:
    """Denominator factors for a hypersurface in P^(n-1): (1-T)(1-pT)...(1-p^(n-2)T)."""
    return [(1, j) for j in range(n - 1)]


def power_sums(coeffs: Sequence[int], S: int) -> List[int]:
    """sum_i omega_i^s for s = 1..S where P(T) = prod (1 - omega_i T)."""
    a = list(coeffs) + [0] * (S + 1)
    if a[0] != 1:
        raise ValueError("P(0) must be 1")
    ps: List[int] = []
    for s in range(1, S + 1):
        val = -s * a[s] - sum(a[i] * ps[s - i - 1] for i in range(1, s))
        ps.append(val)
    return ps


def predicted_counts(
    numerator: Sequence[int],
    factors: Sequence[Tuple[int, int]],
    p: int,
    S: int,
    inverted: bool = False,
) -> List[int]:
    """N_1..N_S implied by Z = P^(+-1) / prod (1 - p^j T)^c."""
    sigma = -1 if inverted else 1
    ps = power_sums(numerator, S)
    out = []
    for s in range(1, S + 1):
        base = sum(c * p ** (j * s) for c, j in factors)
        out.append(base - sigma * ps[s - 1])
    return out


@dataclass
class ZetaData:
    p: int
    n: int
    d: int
    numerator: List[int]
    denominator_factors: List[Tuple[int, int]]
    numerator_is_inverted: bool
    counts: List[Tuple[int, int]]
    method: str
    gamma: Optional[int] = None
    checks: Dict[str, object] = field(default_factory=dict)
    extras: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.numerator or self.numerator[0] != 1:
            raise ValueError("numerator must satisfy P(0) = 1")

    @property
    def weight(self) -> int:
        """Weight of the reciprocal roots of P (middle cohomology of the hypersurface)."""
        return self.n - 2

    @property
    def denominator(self) -> List[int]:
        return expand_factors(self.denominator_factors, self.p)

    def predicted_counts(self, S: int) -> List[int]:
        return predicted_counts(
            self.numerator, self.denominator_factors, self.p, S, self.numerator_is_inverted
        )

    def counts_consistent(self) -> bool:
        if not self.counts:
            return True
        S = max(s for s, _ in self.counts)
        pred = self.predicted_counts(S)
        return all(pred[s - 1] == Ns for s, Ns in self.counts)

    def to_json_dict(self) -> dict:
        out = {
            "p": self.p,
            "n": self.n,
            "d": self.d,
            "method": self.method,
            "numerator": [int(c) for c in self.numerator],
            "numerator_is_inverted": self.numerator_is_inverted,
            "denominator_factors": [[int(c), int(j)] for c, j in self.denominator_factors],
            "counts": [[int(s), int(Ns)] for s, Ns in self.counts],
            "checks": self.checks,
        }
        if self.gamma is not None:
            out["gamma"] = self.gamma
        out.update(self.extras)
        return out


def zeta_fit(
    counts: Sequence[Tuple[int, int]],
    denominator_factors: Sequence[Tuple[int, int]],
    p: int,
    num_degree: int,
    inverted: bool = False,
    functional_eq: Optional[Tuple[int, int]] = None,
    n: int = 0,
    d: int = 0,
    method: str = "fit",
) -> ZetaData:
    """Recover the integer polynomial P from N_1..N_S.

    ``functional_eq = (w, eps)`` supplies a_{D-k} = eps * p^(w(D-2k)/2) * a_k,
    which lets S = floor(D/2) counts determine a degree-D polynomial.
    """
    counts = sorted((int(s), int(v)) for s, v in counts)
    S = len(counts)
    if [s for s, _ in counts] != list(range(1, S + 1)):
        raise ZetaFitError("counts must be given for s = 1..S without gaps")
    D = num_degree
    if S < D:
        if functional_eq is None:
            raise ZetaFitError(f"{S} counts cannot determine a degree-{D} numerator")
        if S < D // 2:
            raise ZetaFitError(f"functional equation needs at least {D // 2} counts, got {S}")
    M = S
    L = TruncSeries(tuple([Fraction(0)] + [Fraction(v, s) for s, v in counts]))
    Z = exp_series(L)
    Q = expand_factors(denominator_factors, p)
    R = Z * TruncSeries.from_list([Fraction(c) for c in Q], M, Fraction(0))
    if inverted:
        R = R.inverse()
    coeffs = []
    for k, c in enumerate(R.coeffs):
        c = Fraction(c)
        if c.denominator != 1:
            raise ZetaFitError(f"coefficient {k} = {c} is not an integer")
        coeffs.append(int(c))
    if S >= D:
        extra = coeffs[D + 1:]
        if any(extra):
            raise ZetaFitError(f"counts imply degree > {D}: extra coefficients {extra}")
        numerator = coeffs[: D + 1]
    else:
        w, eps = functional_eq
        if (w * D) % 2:
            raise ZetaFitError("w * D must be even for the functional equation")
        numerator = coeffs + [0] * (D - S)
        # k < D - S <= D/2, so the exponent w(D - 2k)/2 is a nonnegative integer
        for k in range(D - S):
            numerator[D - k] = eps * p ** (w * (D - 2 * k) // 2) * numerator[k]
        for k in range(D - S, S + 1):
            j = D - k
            if k <= j and numerator[j] != eps * p ** (w * (D - 2 * k) // 2) * numerator[k]:
                raise ZetaFitError("counts violate the functional equation")
    z = ZetaData(
        p=p,
        n=n,
        d=d,
        numerator=[int(c) for c in numerator],
        denominator_factors=[tuple(f) for f in denominator_factors],
        numerator_is_inverted=inverted,
        counts=list(counts),
        method=method,
    )
    if not z.counts_consistent():
        raise ZetaFitError("fitted zeta function does not regenerate the counts")
    return z


def reciprocal_roots(coeffs: Sequence[int]) -> List[complex]:
    """Complex omega with P(T) = prod (1 - omega T), factoring over Z first."""
    import numpy as np
    import sympy

    T = sympy.Symbol("T")
    poly = sympy.Poly(list(reversed([int(c) for c in coeffs])), T)
    if poly.degree() <= 0:
        return []
    _, factors = sympy.factor_list(poly)
    out: List[complex] = []
    for fac, mult in factors:
        c = [int(x) for x in fac.all_coeffs()]  # highest degree first
        # roots of the reversed polynomial are the reciprocal roots
        rev = list(reversed(c))
        while rev and rev[0] == 0:
            rev.pop(0)
        if len(rev) <= 1:
            continue
        roots = np.roots(np.array(rev, dtype=float)) if len(rev) > 1 else []
        for r in roots:
            out.extend([complex(r)] * mult)
    return out


@dataclass
class VerifyReport:
    reciprocal_roots: List[complex]
    weight: int
    abs_ok: bool
    max_abs_error: float
    functional_eq_ok: bool
    newton_slopes: List[Fraction]
    newton_symmetric: bool
    counts_ok: bool

    @property
    def ok(self) -> bool:
        return self.abs_ok and self.functional_eq_ok and self.newton_symmetric and self.counts_ok

    def to_json_dict(self) -> dict:
        return {
            "weight": self.weight,
            "weil_abs_ok": self.abs_ok,
            "max_abs_rel_error": self.max_abs_error,
            "functional_eq_ok": self.functional_eq_ok,
            "newton_slopes": [str(s) for s in self.newton_slopes],
            "newton_symmetric": self.newton_symmetric,
            "counts_ok": self.counts_ok,
            "reciprocal_roots": [[r.real, r.imag] for r in self.reciprocal_roots],
        }


def _multiset_closed(roots: List[complex], target: float, tol: float) -> bool:
    pool = list(roots)
    for w in roots:
        partner = target / w
        best = min(range(len(pool)), key=lambda i: abs(pool[i] - partner), default=None)
        if best is None or abs(pool[best] - partner) > tol * max(1.0, abs(partner)):
            return False
        pool.pop(best)
    return True


def verify_report(z: ZetaData, weight: Optional[int] = None, tol: float = 1e-6) -> VerifyReport:
    """Weil absolute values, closure under omega -> p^w/omega, Newton polygon symmetry."""
    w = z.weight if weight is None else weight
    roots = reciprocal_roots(z.numerator)
    target = math.sqrt(z.p ** w)
    errs = [abs(abs(r) - target) / target for r in roots]
    max_err = max(errs, default=0.0)
    abs_ok = max_err <= tol
    fe_ok = _multiset_closed(roots, float(z.p ** w), tol)
    np_ = poly_newton_polygon(z.numerator, z.p)
    slopes = np_.slope_multiset()
    symmetric = sorted(slopes) == sorted(Fraction(w) - s for s in slopes)
    return VerifyReport(
        reciprocal_roots=roots,
        weight=w,
        abs_ok=abs_ok,
        max_abs_error=max_err,
        functional_eq_ok=fe_ok,
        newton_slopes=slopes,
        newton_symmetric=symmetric,
        counts_ok=z.counts_consistent(),
    )
