"""Fixed-precision p-adic arithmetic.

Two scalar types live here:

``PadicInt``
    an element of Z/p^N Z, i.e. a p-adic integer known to absolute
    precision N.
``PiElem``
    an element of Z_p[pi]/(pi^(p-1) + p), stored as p-1 residues; index i
    holds the coefficient of pi^i.

Both are immutable; every binary operation checks that the operands share
the same (p, N).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

__all__ = [
    "PrecisionError",
    "PadicInt",
    "PiElem",
    "Valuation",
    "ring_ops",
    "valuation",
    "ord_p",
    "vp_int",
    "teichmuller",
    "legendre_symbol",
    "centered_lift",
    "centered_mod",
    "is_probable_odd_prime",
]


class PrecisionError(ArithmeticError):
    """Raised when a result cannot be certified at the working precision."""


def is_probable_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _check_prime(p: int) -> None:
    if p == 2:
        raise ValueError("p = 2 is not supported; p must be an odd prime")
    if not is_probable_odd_prime(p):
        raise ValueError(f"p = {p} is not an odd prime")


def vp_int(x: int, p: int) -> int:
    """Exact p-adic valuation of a nonzero integer."""
    if x == 0:
        raise ValueError("valuation of exact zero is infinite")
    x = abs(x)
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def ord_p(x: Union[int, Fraction], p: int) -> int:
    """Exact valuation of a nonzero rational number."""
    x = Fraction(x)
    return vp_int(x.numerator, p) - (vp_int(x.denominator, p) if x.denominator != 1 else 0)


def centered_mod(r: int, m: int) -> int:
    """Representative of r mod m in (-m/2, m/2]."""
    r %= m
    return r - m if 2 * r > m else r


@dataclass(frozen=True)
class PadicInt:
    """Residue modulo p^N.  Construction reduces any integer input."""

    residue: int
    p: int
    N: int

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError("precision N must be >= 1")
        object.__setattr__(self, "residue", int(self.residue) % self.p ** self.N)

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    @classmethod
    def from_rational(cls, x: Union[int, Fraction], p: int, N: int) -> "PadicInt":
        """Image of a p-integral rational number in Z/p^N."""
        x = Fraction(x)
        if x.denominator % p == 0:
            raise PrecisionError(f"{x} is not p-integral for p={p}")
        m = p ** N
        return cls(x.numerator * pow(x.denominator, -1, m), p, N)

    def _coerce(self, other) -> "PadicInt":
        if isinstance(other, PadicInt):
            if (other.p, other.N) != (self.p, self.N):
                raise ValueError(
                    f"mismatched moduli: ({self.p},{self.N}) vs ({other.p},{other.N})"
                )
            return other
        if isinstance(other, int):
            return PadicInt(other, self.p, self.N)
        if isinstance(other, Fraction):
            return PadicInt.from_rational(other, self.p, self.N)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PadicInt(self.residue + o.residue, self.p, self.N)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PadicInt(self.residue - o.residue, self.p, self.N)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PadicInt(o.residue - self.residue, self.p, self.N)

    def __mul__(self, other):
        if isinstance(other, PiElem):
            return NotImplemented
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PadicInt(self.residue * o.residue, self.p, self.N)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicInt(-self.residue, self.p, self.N)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PadicInt(pow(self.residue, e, self.modulus), self.p, self.N)

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def inverse(self) -> "PadicInt":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        return PadicInt(pow(self.residue, -1, self.modulus), self.p, self.N)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, PadicInt):
            return (self.residue, self.p, self.N) == (other.residue, other.p, other.N)
        if isinstance(other, int):
            return self.residue == other % self.modulus
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.residue, self.p, self.N))

    def __int__(self) -> int:
        return self.residue

    def is_zero(self) -> bool:
        return self.residue == 0

    def __bool__(self) -> bool:
        return self.residue != 0

    def with_precision(self, N: int) -> "PadicInt":
        """Reduce to a lower precision (raising precision is not meaningful)."""
        if N > self.N:
            raise PrecisionError(f"cannot raise precision from {self.N} to {N}")
        return PadicInt(self.residue, self.p, N)

    def __repr__(self) -> str:
        return f"PadicInt({self.residue} mod {self.p}^{self.N})"


@dataclass(frozen=True)
class PiElem:
    """Element of Z_p[pi]/(pi^(p-1) + p) with residues mod p^N.

    ``coeffs[i]`` is the residue of the coefficient of pi^i.
    """

    coeffs: tuple
    p: int
    N: int

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.p - 1:
            raise ValueError(f"PiElem needs exactly p-1 = {self.p - 1} coefficients")
        m = self.p ** self.N
        object.__setattr__(self, "coeffs", tuple(int(c) % m for c in self.coeffs))

    @classmethod
    def zero(cls, p: int, N: int) -> "PiElem":
        return cls((0,) * (p - 1), p, N)

    @classmethod
    def one(cls, p: int, N: int) -> "PiElem":
        return cls.scalar(1, p, N)

    @classmethod
    def scalar(cls, c, p: int, N: int) -> "PiElem":
        if isinstance(c, Fraction):
            c = PadicInt.from_rational(c, p, N).residue
        return cls((int(c),) + (0,) * (p - 2), p, N)

    @classmethod
    def pi_power(cls, k: int, p: int, N: int, coeff: int = 1) -> "PiElem":
        """coeff * pi^k, reduced through pi^(p-1) = -p."""
        q, r = divmod(k, p - 1)
        c = [0] * (p - 1)
        c[r] = coeff * (-p) ** q
        return cls(tuple(c), p, N)

    @classmethod
    def from_padic(cls, a: PadicInt) -> "PiElem":
        return cls.scalar(a.residue, a.p, a.N)

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    def coeff(self, i: int) -> PadicInt:
        return PadicInt(self.coeffs[i], self.p, self.N)

    def _coerce(self, other) -> "PiElem":
        if isinstance(other, PiElem):
            if (other.p, other.N) != (self.p, self.N):
                raise ValueError(
                    f"mismatched moduli: ({self.p},{self.N}) vs ({other.p},{other.N})"
                )
            return other
        if isinstance(other, PadicInt):
            if (other.p, other.N) != (self.p, self.N):
                raise ValueError(
                    f"mismatched moduli: ({self.p},{self.N}) vs ({other.p},{other.N})"
                )
            return PiElem.scalar(other.residue, self.p, self.N)
        if isinstance(other, (int, Fraction)):
            return PiElem.scalar(other, self.p, self.N)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PiElem(tuple(a + b for a, b in zip(self.coeffs, o.coeffs)), self.p, self.N)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PiElem(tuple(a - b for a, b in zip(self.coeffs, o.coeffs)), self.p, self.N)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        return PiElem(tuple(-a for a in self.coeffs), self.p, self.N)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        e = self.p - 1
        m = self.modulus
        out = [0] * e
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if not b:
                    continue
                k = i + j
                if k >= e:
                    out[k - e] -= self.p * a * b
                else:
                    out[k] += a * b
        return PiElem(tuple(x % m for x in out), self.p, self.N)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of PiElem are not supported")
        result = PiElem.one(self.p, self.N)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        o = self._coerce(other) if not isinstance(other, PiElem) else other
        if o is NotImplemented:
            return NotImplemented
        return (self.coeffs, self.p, self.N) == (o.coeffs, o.p, o.N)

    def __hash__(self) -> int:
        return hash((self.coeffs, self.p, self.N))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_pi_free(self) -> bool:
        """True when every coefficient of pi^i, i >= 1, vanishes mod p^N."""
        return not any(self.coeffs[1:])

    def to_padic(self) -> PadicInt:
        if not self.is_pi_free():
            raise PrecisionError(f"{self} is not in Z_p (nonzero pi-components)")
        return PadicInt(self.coeffs[0], self.p, self.N)

    def conjugate(self, zeta: int) -> "PiElem":
        """Image under pi -> zeta*pi, where zeta is a (p-1)-th root of unity in Z_p.

        Both pi and zeta*pi are roots of x^(p-1) = -p, so this is a ring
        automorphism fixing Z_p.
        """
        m = self.modulus
        if pow(zeta, self.p - 1, m) != 1:
            raise ValueError("zeta must satisfy zeta^(p-1) = 1 mod p^N")
        return PiElem(
            tuple(c * pow(zeta, i, m) for i, c in enumerate(self.coeffs)), self.p, self.N
        )

    def __repr__(self) -> str:
        terms = [
            (f"{c}" if i == 0 else f"{c}*pi^{i}") for i, c in enumerate(self.coeffs) if c
        ]
        body = " + ".join(terms) if terms else "0"
        return f"PiElem({body} mod {self.p}^{self.N})"


def ring_ops(a, b, op: str):
    """Apply ``op`` in {'add', 'sub', 'mul'} to two elements of one ring."""
    if type(a) is not type(b):
        raise TypeError(f"operands of different kinds: {type(a).__name__}, {type(b).__name__}")
    if (a.p, a.N) != (b.p, b.N):
        raise ValueError(f"mismatched moduli: ({a.p},{a.N}) vs ({b.p},{b.N})")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


class Valuation(NamedTuple):
    """A valuation together with a flag telling whether it is only a lower bound.

    ``capped`` is set when the value hit the precision cap N, i.e. the
    element is zero to the working precision and the true valuation is
    at least ``value``.
    """

    value: Fraction
    capped: bool

    def __str__(self) -> str:
        return f">= {self.value}" if self.capped else str(self.value)


def _residue_val(r: int, p: int, N: int) -> int:
    if r == 0:
        return N
    k = 0
    while r % p == 0 and k < N:
        r //= p
        k += 1
    return k


def valuation(a: Union[PadicInt, PiElem]) -> Valuation:
    """p-adic valuation normalized so that ord_p(p) = 1 (and ord_p(pi) = 1/(p-1))."""
    if isinstance(a, PadicInt):
        if a.residue == 0:
            return Valuation(Fraction(a.N), True)
        return Valuation(Fraction(_residue_val(a.residue, a.p, a.N)), False)
    if isinstance(a, PiElem):
        best = Fraction(a.N)
        capped = True
        for i, c in enumerate(a.coeffs):
            if c == 0:
                continue
            v = _residue_val(c, a.p, a.N) + Fraction(i, a.p - 1)
            if v < best:
                best, capped = v, False
        return Valuation(best, capped)
    raise TypeError(f"cannot take the valuation of {type(a).__name__}")


def teichmuller(a: int, p: int, N: int) -> PadicInt:
    """The (p-1)-th root of unity (or 0) congruent to a mod p.

    Iterates x -> x^p mod p^N; the iteration is a contraction and stabilises
    after at most N steps.
    """
    _check_prime(p)
    m = p ** N
    x = a % p
    while True:
        y = pow(x, p, m)
        if y == x:
            return PadicInt(x, p, N)
        x = y


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p) via Euler's criterion."""
    _check_prime(p)
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def centered_lift(a: Union[PadicInt, PiElem]) -> int:
    """Integer in (-p^N/2, p^N/2] congruent to ``a``."""
    if isinstance(a, PiElem):
        a = a.to_padic()
    return centered_mod(a.residue, a.modulus)

