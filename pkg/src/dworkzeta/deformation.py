"""Zeta numerator of the Dwork quartic family x1^4 + ... + x4^4 - 4 G x1 x2 x3 x4.

The Frobenius matrix at the parameter mu = Teich(G) splits along the
interior basis S (21 monomials) into blocks:

* S5, twelve permutations of (1,2,2,3): scalar, root (-1)^((p-1)/4) L4 p;
* S2, S3, S4, pairs such as {(1,1,3,3), (3,3,1,1)}: roots h+ p and h- p;
* S1 = {(1,1,1,1), (2,2,2,2), (3,3,3,3)}: one root L4 p, plus a quadratic.

Here L4 = ((1 - G^4)/p) and h+- = ((1 -+ G^2)/p) are Legendre symbols.  The
quadratic 1 - a T + p^2 T^2 is fixed by one exact point count over F_p.

The Picard-Fuchs systems behind the blocks are checked as exact rational
power series by :func:`picard_fuchs_check`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .diagonal import h0_basis
from .oracle import DEFAULT_CAP, count_projective, ff_build
from .padic import _check_prime, legendre_symbol
from .poly import dwork_quartic
from .series import TruncSeries
from .zeta import ZetaData, poly_mul, projective_denominator

__all__ = [
    "SingularHypersurfaceError",
    "BlockFactors",
    "block_partition",
    "block_factors",
    "residual_quadratic",
    "assemble_P",
    "PFSystem",
    "PF_SYSTEM",
    "PFReport",
    "picard_fuchs_check",
    "solve_pf_series",
]


class SingularHypersurfaceError(ValueError):
    """G^4 = 1 in F_p: the quartic has a singular point."""


def _check_family(p: int, gamma: int) -> int:
    _check_prime(p)
    if p % 4 != 1:
        raise ValueError(
            f"p = {p} is not 1 mod 4; only the p = 1 mod 4 block structure is implemented"
        )
    g = gamma % p
    if g == 0:
        raise ValueError("G = 0 is the Fermat quartic; use the diagonal route")
    if pow(g, 4, p) == 1:
        raise SingularHypersurfaceError(
            f"G = {gamma}: G^4 = 1 mod {p}, so the point [1:G:G:G] is singular"
        )
    return g


def block_partition() -> Dict[str, Tuple[Tuple[int, ...], ...]]:
    """The 21 interior monomials of degree-4 quartics in 4 variables, by block."""
    blocks: Dict[str, list] = {"S1": [], "S2": [], "S3": [], "S4": [], "S5": []}
    pair_of = {}
    for v in h0_basis(4, 4):
        e = v[1:]
        if len(set(e)) == 1:
            blocks["S1"].append(e)
        elif sorted(e) == [1, 2, 2, 3]:
            blocks["S5"].append(e)
        else:
            # (1,1,3,3)-type: the pair is determined by which slots hold 1
            ones = tuple(i for i, x in enumerate(e) if x == 1)
            key = ones if 0 in ones else tuple(i for i in range(4) if i not in ones)
            pair_of.setdefault(key, []).append(e)
    for name, key in zip(("S2", "S3", "S4"), sorted(pair_of)):
        blocks[name] = pair_of[key]
    return {k: tuple(sorted(v)) for k, v in blocks.items()}


@dataclass(frozen=True)
class BlockFactors:
    p: int
    gamma: int
    L4: int  # ((1 - G^4)/p)
    h_plus: int  # ((1 - G^2)/p)
    h_minus: int  # ((1 + G^2)/p)
    u5_root: int
    pair_roots: Tuple[Tuple[int, int], ...]
    root19: int
    residual: Optional[int] = None

    def known_roots(self) -> List[int]:
        """The 19 reciprocal roots fixed by the block structure."""
        out = [self.u5_root] * 12
        for pr in self.pair_roots:
            out.extend(pr)
        out.append(self.root19)
        return out

    def with_residual(self, a: int) -> "BlockFactors":
        return BlockFactors(
            self.p, self.gamma, self.L4, self.h_plus, self.h_minus,
            self.u5_root, self.pair_roots, self.root19, a,
        )


def block_factors(p: int, gamma: int) -> BlockFactors:
    """Closed-form roots from Legendre symbols (Euler's criterion)."""
    g = _check_family(p, gamma)
    L4 = legendre_symbol(1 - g ** 4, p)
    hp = legendre_symbol(1 - g * g, p)
    hm = legendre_symbol(1 + g * g, p)
    u5 = (-1) ** ((p - 1) // 4) * L4 * p
    pair = (hp * p, hm * p)
    return BlockFactors(p, gamma, L4, hp, hm, u5, (pair, pair, pair), L4 * p)


def residual_quadratic(bf: BlockFactors, N1: int) -> int:
    """a in 1 - a T + p^2 T^2 from the exact count N1 over F_p.

    With Z = 1/(P (1-T)(1-pT)(1-p^2 T)), N1 = 1 + p + p^2 + (sum of all 21 roots).
    """
    p = bf.p
    a = N1 - (1 + p + p * p) - sum(bf.known_roots())
    if abs(a) > 2 * p:
        raise ValueError(f"residual a = {a} exceeds the Weil bound 2p = {2 * p}; N1 is inconsistent")
    return a


def _numerator(bf: BlockFactors) -> List[int]:
    out = [1]
    for r in bf.known_roots():
        out = poly_mul(out, [1, -r])
    return poly_mul(out, [1, -bf.residual, bf.p * bf.p])


def assemble_P(
    p: int,
    gamma: int,
    N1: Optional[int] = None,
    check_N2: bool = False,
    workers: int = 1,
    cap: int = DEFAULT_CAP,
) -> ZetaData:
    """Full degree-21 numerator; N1 is counted by brute force when not supplied."""
    bf = block_factors(p, gamma)
    f = dwork_quartic(gamma)
    if N1 is None:
        N1 = count_projective(f, ff_build(p, 1, cap), workers)
    bf = bf.with_residual(residual_quadratic(bf, N1))
    z = ZetaData(
        p=p,
        n=4,
        d=4,
        numerator=_numerator(bf),
        denominator_factors=projective_denominator(4),
        numerator_is_inverted=True,
        counts=[(1, N1)],
        method="dwork-family",
        gamma=gamma,
    )
    if len(z.numerator) != 22:
        raise RuntimeError("numerator degree is not 21")
    z.extras.update(
        {
            "legendre": {"L4": bf.L4, "h_plus": bf.h_plus, "h_minus": bf.h_minus},
            "u5_root": bf.u5_root,
            "pair_roots": [list(pr) for pr in bf.pair_roots],
            "root19": bf.root19,
            "residual_a": bf.residual,
            "N1": N1,
        }
    )
    z.checks["weil_residual"] = abs(bf.residual) <= 2 * p
    if check_N2:
        predicted = z.predicted_counts(2)[1]
        actual = count_projective(f, ff_build(p, 2, cap), workers)
        z.counts.append((2, actual))
        z.extras["N2_predicted"] = predicted
        z.checks["N2_oracle"] = predicted == actual
    return z


# Picard-Fuchs systems --------------------------------------------------------

Poly = Tuple[Fraction, ...]  # coefficients in lambda, low degree first


def _poly(*coeffs) -> Poly:
    return tuple(Fraction(c) for c in coeffs)


@dataclass(frozen=True)
class PFSystem:
    """dC/dlambda = C B with B = Btilde / (1 - lambda^4), Btilde polynomial."""

    b1: Tuple[Tuple[Poly, ...], ...]
    b2: Tuple[Tuple[Poly, ...], ...]
    b3: Tuple[Tuple[Poly, ...], ...]


_ONE_MINUS_L4 = _poly(1, 0, 0, 0, -1)

PF_SYSTEM = PFSystem(
    b1=((_poly(0, 0, 0, 2),),),
    b2=(
        (_poly(0, 0, 0, 1), _poly(0, 1)),
        (_poly(0, 1), _poly(0, 0, 0, 1)),
    ),
    b3=(
        (_poly(0), _poly(0), _poly(0, Fraction(1, 16))),
        (tuple(-4 * c for c in _ONE_MINUS_L4), _poly(0), _poly(0, 0, Fraction(-7, 4))),
        (_poly(0), tuple(-4 * c for c in _ONE_MINUS_L4), _poly(0, 0, 0, 6)),
    ),
)


def _series(coeffs: Sequence, M: int) -> TruncSeries:
    return TruncSeries.from_list([Fraction(c) for c in coeffs], M, Fraction(0))


def _inv_pow(M: int, e: Fraction) -> TruncSeries:
    """(1 - lambda^4)^e."""
    return _series(_ONE_MINUS_L4, M).binomial_power(e)


def _mat_series(B: Sequence[Sequence[Poly]], M: int) -> List[List[TruncSeries]]:
    inv = _inv_pow(M, Fraction(-1))
    return [[_series(e, M) * inv for e in row] for row in B]


def _mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for t in range(1, k):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def _first_nonzero(s: TruncSeries) -> Optional[int]:
    for k, c in enumerate(s.coeffs):
        if c != 0:
            return k
    return None


def _min_failure(values) -> Optional[int]:
    bad = [v for v in values if v is not None]
    return min(bad) if bad else None


def _ode_residual(C, B, M: int) -> Optional[int]:
    """First degree at which C' - C B is nonzero, through degree M - 1."""
    CB = _mat_mul(C, _mat_series(B, M))
    fails = []
    for i, row in enumerate(C):
        for j, entry in enumerate(row):
            diff = entry.derivative() - CB[i][j].truncate(M - 1)
            fails.append(_first_nonzero(diff))
    return _min_failure(fails)


def solve_pf_series(B: Sequence[Sequence[Poly]], C0, M: int) -> List[List[TruncSeries]]:
    """Power series C with (1 - lambda^4) C' = C Btilde and C(0) = C0, through degree M."""
    n = len(B)
    deg = max(len(e) for row in B for e in row)
    coef = [[[Fraction(0)] * (M + 1) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            coef[i][j][0] = Fraction(C0[i][j])
    # lambda^k coefficient: (k+1) C_{k+1} - (k-3) C_{k-3} = sum_t C_{k-t} Btilde_t
    for k in range(M):
        for i in range(n):
            for j in range(n):
                acc = Fraction(0)
                for t in range(min(deg, k + 1)):
                    for l in range(n):
                        e = B[l][j]
                        if t < len(e) and e[t]:
                            acc += coef[i][l][k - t] * e[t]
                if k >= 4:
                    acc += (k - 3) * coef[i][j][k - 3]
                coef[i][j][k + 1] = acc / (k + 1)
    return [[TruncSeries(tuple(coef[i][j])) for j in range(n)] for i in range(n)]


def _det3(C):
    (a, b, c), (d, e, f), (g, h, i) = C
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


@dataclass
class PFReport:
    M_deg: int
    c_ok: bool
    two_by_two_ok: bool
    two_by_two_identity_variant_ok: bool
    three_by_three_ok: bool
    det_wronskian_ok: bool
    det_identity_frame_ok: bool
    scalar_ode_ok: bool
    first_failure: Dict[str, Optional[int]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (
            self.c_ok
            and self.two_by_two_ok
            and self.three_by_three_ok
            and self.det_wronskian_ok
            and self.det_identity_frame_ok
            and self.scalar_ode_ok
        )


def _two_by_two(M: int, variant: bool):
    a = _series((1, 0, -1), M).binomial_power(Fraction(-1, 2)) * Fraction(1, 2)
    b = _series((1, 0, 1), M).binomial_power(Fraction(-1, 2)) * Fraction(1, 2)
    if variant:
        # a I + b [[1, -1], [-1, 1]]
        return [[a + b, -b], [-b, a + b]]
    # a [[1, 1], [1, 1]] + b [[1, -1], [-1, 1]]
    return [[a + b, a - b], [a - b, a + b]]


def picard_fuchs_check(M_deg: int = 40, system: PFSystem = PF_SYSTEM) -> PFReport:
    """Exact-rational checks of the three block systems through lambda^M_deg."""
    M = M_deg + 1  # derivatives then reach degree M_deg
    fail: Dict[str, Optional[int]] = {}

    c = [[_inv_pow(M, Fraction(-1, 2))]]
    fail["c"] = _ode_residual(c, system.b1, M)

    fail["two_by_two"] = _ode_residual(_two_by_two(M, variant=False), system.b2, M)
    variant = _two_by_two(M, variant=True)
    variant_init = variant[0][1][0] == 0 and variant[0][0][0] == 1
    fail["two_by_two_identity_variant"] = _ode_residual(variant, system.b2, M) if variant_init else 0

    ident = [[int(i == j) for j in range(3)] for i in range(3)]
    wron = [[1, 0, 0], [0, Fraction(-1, 4), 0], [0, 0, Fraction(1, 16)]]
    # two spare degrees so third derivatives still reach lambda^M_deg
    C_id = solve_pf_series(system.b3, ident, M + 2)
    C_wr = solve_pf_series(system.b3, wron, M + 2)
    fail["three_by_three"] = _min_failure(
        [_ode_residual(C_id, system.b3, M), _ode_residual(C_wr, system.b3, M)]
    )

    base = _inv_pow(M, Fraction(-3, 2))
    fail["det_wronskian"] = _first_nonzero(_det3(C_wr) - base * Fraction(-1, 64))
    fail["det_identity_frame"] = _first_nonzero(_det3(C_id) - base)

    # every entry of the first column solves the scalar third-order equation
    lhs_factor = _series(_ONE_MINUS_L4, M + 2)
    lam = _series((0, 1), M + 2)
    scalar = []
    for C in (C_id, C_wr):
        for row in C:
            f0 = row[0]
            f1 = f0.derivative()
            f2 = f1.derivative()
            f3 = f2.derivative()
            Md = f3.M
            lhs = lhs_factor.truncate(Md) * f3
            rhs = (
                lam.truncate(Md) * f0.truncate(Md)
                + lam.truncate(Md) * lam.truncate(Md) * f1.truncate(Md) * 7
                + lam.truncate(Md) * lam.truncate(Md) * lam.truncate(Md) * f2.truncate(Md) * 6
            )
            scalar.append(_first_nonzero(lhs - rhs))
    fail["scalar_ode"] = _min_failure(scalar)

    return PFReport(
        M_deg=M_deg,
        c_ok=fail["c"] is None,
        two_by_two_ok=fail["two_by_two"] is None,
        two_by_two_identity_variant_ok=fail["two_by_two_identity_variant"] is None,
        three_by_three_ok=fail["three_by_three"] is None,
        det_wronskian_ok=fail["det_wronskian"] is None,
        det_identity_frame_ok=fail["det_identity_frame"] is None,
        scalar_ode_ok=fail["scalar_ode"] is None,
        first_failure=fail,
    )
