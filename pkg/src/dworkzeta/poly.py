"""Homogeneous polynomials over F_p, stored as exponent-tuple -> integer maps."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

__all__ = ["HomogeneousPoly", "parse_poly", "fermat", "dwork_quartic"]


@dataclass(frozen=True)
class HomogeneousPoly:
    """f = sum coeff * x^exps in n variables, every monomial of total degree d.

    Coefficients are kept as plain integers; consumers reduce them mod p.
    """

    n: int
    d: int
    terms: tuple  # ((exps, coeff), ...) sorted by exps

    @classmethod
    def from_dict(cls, terms: Mapping, n: Optional[int] = None) -> "HomogeneousPoly":
        items = [(tuple(int(e) for e in k), int(c)) for k, c in terms.items() if c != 0]
        if n is None:
            if not items:
                raise ValueError("cannot infer the number of variables of the zero polynomial")
            n = len(items[0][0])
        degrees = {sum(k) for k, _ in items}
        if any(len(k) != n for k, _ in items):
            raise ValueError("exponent tuples of inconsistent length")
        if len(degrees) > 1:
            raise ValueError(f"polynomial is not homogeneous (degrees {sorted(degrees)})")
        d = degrees.pop() if degrees else 0
        return cls(n, d, tuple(sorted(items)))

    def reduced(self, p: int) -> "HomogeneousPoly":
        """Copy with coefficients in 0..p-1 and zero terms dropped."""
        items = tuple((k, c % p) for k, c in self.terms if c % p)
        return HomogeneousPoly(self.n, self.d, items)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def restrict_zero(self, zero_vars: Sequence[int]) -> "HomogeneousPoly":
        """Set the variables with the given 0-based indices to zero."""
        z = set(zero_vars)
        items = tuple((k, c) for k, c in self.terms if all(k[i] == 0 for i in z))
        return HomogeneousPoly(self.n, self.d, items)

    def evaluate(self, point: Sequence[int], p: int) -> int:
        total = 0
        for k, c in self.terms:
            t = c
            for x, e in zip(point, k):
                t = t * pow(x, e, p) % p
            total += t
        return total % p

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.terms:
            mono = "*".join(
                f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(k) if e
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


def parse_poly(text: str, n: Optional[int] = None) -> HomogeneousPoly:
    """Parse an expression in variables x1, x2, ... (``^`` or ``**`` for powers).

    ``n`` defaults to the largest variable index present.
    """
    import sympy

    names = sorted({int(m) for m in re.findall(r"\bx(\d+)\b", text)})
    if not names and n is None:
        raise ValueError("no variables x1, x2, ... found in the polynomial")
    if names and names[0] < 1:
        raise ValueError("variables are numbered from x1")
    nv = n if n is not None else names[-1]
    if names and names[-1] > nv:
        raise ValueError(f"variable x{names[-1]} exceeds n = {nv}")
    gens = sympy.symbols(" ".join(f"x{i}" for i in range(1, nv + 1)), seq=True)
    local = {str(g): g for g in gens}
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals=local)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ValueError(f"cannot parse polynomial {text!r}: {exc}") from None
    stray = expr.free_symbols - set(gens)
    if stray:
        raise ValueError(f"unexpected symbols {sorted(map(str, stray))}")
    poly = sympy.Poly(sympy.expand(expr), *gens)
    terms = {}
    for mon, c in poly.terms():
        if not c.is_integer:
            raise ValueError(f"non-integer coefficient {c}")
        terms[mon] = int(c)
    return HomogeneousPoly.from_dict(terms, n=nv)


def fermat(n: int, d: int, coeffs: Optional[Sequence[int]] = None) -> HomogeneousPoly:
    """Diagonal form sum a_i x_i^d (all a_i = 1 by default)."""
    coeffs = [1] * n if coeffs is None else list(coeffs)
    if len(coeffs) != n:
        raise ValueError("need one coefficient per variable")
    terms = {}
    for i, a in enumerate(coeffs):
        e = [0] * n
        e[i] = d
        terms[tuple(e)] = a
    return HomogeneousPoly.from_dict(terms, n=n)


def dwork_quartic(gamma: int) -> HomogeneousPoly:
    """x1^4 + x2^4 + x3^4 + x4^4 - 4 gamma x1 x2 x3 x4."""
    terms = dict(fermat(4, 4).terms)
    terms[(1, 1, 1, 1)] = -4 * gamma
    return HomogeneousPoly.from_dict(terms, n=4)
