"""Truncated power series, Newton polygons and Newton's identities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .padic import PadicInt, PiElem, PrecisionError, ord_p

__all__ = [
    "TruncSeries",
    "series_ops",
    "binomial",
    "NewtonPolygon",
    "newton_polygon",
    "poly_newton_polygon",
    "slope_root_count",
    "traces_to_charpoly",
    "exp_series",
]


def binomial(e: Union[int, Fraction], k: int) -> Fraction:
    """Generalized binomial coefficient C(e, k) as an exact rational."""
    e = Fraction(e)
    out = Fraction(1)
    for i in range(k):
        out = out * (e - i) / (i + 1)
    return out


def _embed(x: Fraction, like):
    """Map an exact rational into the ring of ``like``."""
    if isinstance(like, PadicInt):
        return PadicInt.from_rational(x, like.p, like.N)
    if isinstance(like, PiElem):
        return PiElem.scalar(PadicInt.from_rational(x, like.p, like.N).residue, like.p, like.N)
    if isinstance(like, int) and Fraction(x).denominator == 1:
        return int(x)
    return Fraction(x)


def _ring_p(like) -> Optional[int]:
    return like.p if isinstance(like, (PadicInt, PiElem)) else None


@dataclass(frozen=True)
class TruncSeries:
    """Power series sum coeffs[k] t^k known through degree M = len(coeffs) - 1."""

    coeffs: tuple

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("a truncated series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def from_list(cls, coeffs: Sequence, M: int, zero=0) -> "TruncSeries":
        c = list(coeffs[: M + 1])
        c += [zero] * (M + 1 - len(c))
        return cls(tuple(c))

    @property
    def M(self) -> int:
        return len(self.coeffs) - 1

    def _zero(self):
        return self.coeffs[0] * 0

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, M: int) -> "TruncSeries":
        if M > self.M:
            raise PrecisionError(f"series only known through degree {self.M}")
        return TruncSeries(self.coeffs[: M + 1])

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            c = list(self.coeffs)
            c[0] = c[0] + other
            return TruncSeries(tuple(c))
        M = min(self.M, other.M)
        return TruncSeries(tuple(self.coeffs[k] + other.coeffs[k] for k in range(M + 1)))

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries(tuple(c * other for c in self.coeffs))
        M = min(self.M, other.M)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(M + 1):
            acc = self._zero()
            for i in range(k + 1):
                if a[i] and b[k - i]:
                    acc = acc + a[i] * b[k - i]
            out.append(acc)
        return TruncSeries(tuple(out))

    __rmul__ = __mul__

    def derivative(self) -> "TruncSeries":
        if self.M == 0:
            return TruncSeries((self._zero(),))
        return TruncSeries(tuple(k * self.coeffs[k] for k in range(1, self.M + 1)))

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by t^k keeping the truncation degree."""
        z = self._zero()
        return TruncSeries(tuple([z] * k + list(self.coeffs[: self.M + 1 - k])))

    def inverse(self) -> "TruncSeries":
        c0 = self.coeffs[0]
        if isinstance(c0, PadicInt):
            inv0 = c0.inverse()
        elif isinstance(c0, PiElem):
            inv0 = c0.to_padic().inverse()
        else:
            inv0 = Fraction(1) / Fraction(c0)
        out = [inv0]
        for k in range(1, self.M + 1):
            acc = self._zero()
            for i in range(1, k + 1):
                acc = acc + self.coeffs[i] * out[k - i]
            out.append(-(acc * inv0))
        return TruncSeries(tuple(out))

    def binomial_power(self, e: Union[int, Fraction]) -> "TruncSeries":
        """(1 + u)^e for a series 1 + u with u(0) = 0."""
        e = Fraction(e)
        one = self.coeffs[0]
        if one != 1:
            raise ValueError("binomial power needs constant term 1")
        p = _ring_p(one)
        if p is not None and e.denominator % p == 0:
            raise ValueError(f"exponent {e} is not p-integral for p={p}")
        z = self._zero()
        u = TruncSeries((z,) + self.coeffs[1:])
        result = [z] * (self.M + 1)
        term = TruncSeries((one,) + (z,) * self.M)
        for k in range(self.M + 1):
            b = _embed(binomial(e, k), one)
            for i in range(k, self.M + 1):
                if term.coeffs[i]:
                    result[i] = result[i] + b * term.coeffs[i]
            term = term * u
        return TruncSeries(tuple(result))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"TruncSeries({list(self.coeffs)} + O(t^{self.M + 1}))"


def series_ops(
    a: TruncSeries,
    b: Optional[TruncSeries],
    op: str,
    exponent: Optional[Union[int, Fraction]] = None,
) -> TruncSeries:
    """Dispatch for 'add', 'mul' and 'pow' (binomial power of ``a``)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "pow":
        if exponent is None:
            raise ValueError("op 'pow' needs an exponent")
        return a.binomial_power(exponent)
    raise ValueError(f"unknown op {op!r}")


def exp_series(f: TruncSeries) -> TruncSeries:
    """exp(f) over exact rationals, for f(0) = 0."""
    if f.coeffs[0] != 0:
        raise ValueError("exp_series needs f(0) = 0")
    fc = [Fraction(c) for c in f.coeffs]
    g = [Fraction(1)]
    for n in range(1, f.M + 1):
        g.append(sum(k * fc[k] * g[n - k] for k in range(1, n + 1)) / n)
    return TruncSeries(tuple(g))


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of (degree, valuation) points.

    ``slopes`` lists (slope, horizontal length) segment by segment.
    """

    vertices: tuple
    slopes: tuple

    def slope_multiset(self) -> list:
        out = []
        for s, length in self.slopes:
            out.extend([s] * length)
        return out

    def value_at(self, x: Fraction) -> Fraction:
        """Height of the polygon above abscissa x."""
        vs = self.vertices
        if x < vs[0][0] or x > vs[-1][0]:
            raise ValueError("abscissa outside the polygon")
        for (x0, y0), (x1, y1) in zip(vs, vs[1:]):
            if x0 <= x <= x1:
                return y0 + (y1 - y0) * Fraction(x - x0, x1 - x0)
        return vs[-1][1]

    @property
    def length(self) -> int:
        return self.vertices[-1][0] - self.vertices[0][0]


def newton_polygon(points: Iterable) -> NewtonPolygon:
    """Lower convex hull; points with valuation ``None`` (zero coefficient) are skipped.

    Collinear points merge into one segment.
    """
    best: dict = {}
    for n, v in points:
        if v is None:
            continue
        v = Fraction(v)
        if n not in best or v < best[n]:
            best[n] = v
    if not best:
        raise ValueError("newton_polygon needs at least one point")
    pts = sorted(best.items())
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] unless it lies strictly below the chord hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = tuple(
        (Fraction(y1 - y0) / (x1 - x0), x1 - x0) for (x0, y0), (x1, y1) in zip(hull, hull[1:])
    )
    return NewtonPolygon(tuple(hull), slopes)


def poly_newton_polygon(coeffs: Sequence[int], p: int) -> NewtonPolygon:
    """Newton polygon of an integer polynomial sum coeffs[k] T^k."""
    return newton_polygon((k, ord_p(c, p) if c else None) for k, c in enumerate(coeffs))


def slope_root_count(np_: NewtonPolygon, lam: Union[int, Fraction]) -> int:
    """Total horizontal length of segments with slope <= lam."""
    lam = Fraction(lam)
    return sum(length for s, length in np_.slopes if s <= lam)


def traces_to_charpoly(powersums: Sequence, M: int) -> TruncSeries:
    """det(1 - A T) through degree M from t_s = tr(A^s), by Newton's identities."""
    t = [Fraction(x) for x in powersums]
    if M > len(t):
        raise ValueError(f"degree {M} needs at least {M} power sums, got {len(t)}")
    c = [Fraction(1)]
    for k in range(1, M + 1):
        c.append(-sum(t[i - 1] * c[k - i] for i in range(1, k + 1)) / k)
    return TruncSeries(tuple(c))
