"""Direct Dwork method: point counts from traces of a truncated operator.

Let W(x) = x0 * f(x) and let Delta be its support.  The function
C(X) = prod_{v in Delta} theta(W_v X^v) (W_v the Teichmueller lift of the
coefficient) has coefficients C_w, and the operator U = Psi_p o C acts on
monomials X^v with d*v0 = v1 + ... + vn by

    U X^v = sum_u C_{p u - v} X^u.

Every C_w lies in a single pi-slot: C_w = e_w * pi^(w0 mod (p-1)), since each
monomial of Delta has x0-degree 1.  In the rescaled basis
Y'^v = pi^(v0 mod (p-1)) X^v the matrix entries become e_w * (-p)^delta with
delta in {0, 1}, i.e. plain integers mod p^N.  The change of basis is
diagonal, so traces are unchanged; this "graded" integer matrix is what the
production path uses.  ``UMatrix.pi_matrix`` gives the unrescaled matrix over
Z_p[pi] for cross-checks.

Point counts come from restricted traces on the subspaces
L_A = span{X^v : v_i > 0 for i in A}, A a subset of {1..n}:

    N_s = (q^(s(n-1)) - 1)/(q^s - 1)
          + (-1)^n q^(-s) sum_A (-1)^(n-|A|) q^(s(n-|A|)) tr(U^s | L_A),   q = p.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .dwork import SplittingCoeffs, splitting_coeffs
from .modmat import matpow_traces, pi_traces
from .padic import (
    PadicInt,
    PiElem,
    PrecisionError,
    _check_prime,
    centered_mod,
    teichmuller,
    vp_int,
)
from .poly import HomogeneousPoly
from .series import TruncSeries, traces_to_charpoly

__all__ = [
    "monomial_basis",
    "delta_lifts",
    "big_c_entry",
    "big_c_coeffs",
    "truncation_degree",
    "required_precision",
    "UMatrix",
    "u_matrix",
    "subset_traces",
    "all_subset_traces",
    "counts_from_traces",
    "DirectResult",
    "direct_counts",
    "fredholm_det",
    "torus_trace_identity",
    "stability_audit",
    "tail_certificate",
]

GUARD = Fraction(1, 10)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def monomial_basis(n: int, d: int, M: int) -> List[tuple]:
    """All (v0, v1..vn) with d*v0 = v1 + ... + vn and v0 <= M, sorted."""
    if n < 1 or d < 1 or M < 0:
        raise ValueError("need n >= 1, d >= 1, M >= 0")
    out = []
    for v0 in range(M + 1):
        for comp in _compositions(d * v0, n):
            out.append((v0,) + comp)
    out.sort()
    return out


def delta_lifts(P: HomogeneousPoly, p: int, N: int) -> Dict[tuple, PadicInt]:
    """Support of W = x0 * P with Teichmueller lifts of the nonzero coefficients."""
    return {
        (1,) + exps: teichmuller(c, p, N)
        for exps, c in P.terms
        if c % p
    }


def _rho(k: int, p: int) -> int:
    return k % (p - 1)


def big_c_entry(W_coeffs: Dict[tuple, PadicInt], w: Sequence[int], sc: SplittingCoeffs) -> PiElem:
    """Coefficient of X^w in prod_v theta(W_v X^v), by direct enumeration of (k_v)."""
    p, N = sc.p, sc.N
    w = tuple(w)
    if min(w) < 0:
        return PiElem.zero(p, N)
    if w[0] > sc.n_max:
        raise PrecisionError(f"need splitting coefficients through {w[0]}, have {sc.n_max}")
    items = sorted(W_coeffs.items())
    total = PiElem.zero(p, N)

    def rec(i: int, rest: tuple, acc: PiElem) -> None:
        nonlocal total
        if i == len(items):
            if not any(rest):
                total = total + acc
            return
        v, W = items[i]
        kmax = min((r // c for r, c in zip(rest, v) if c), default=0)
        for k in range(kmax + 1):
            nxt = tuple(r - k * c for r, c in zip(rest, v))
            rec(i + 1, nxt, acc * (sc.lam(k) * (W ** k)))

    rec(0, w, PiElem.one(p, N))
    return total


def big_c_coeffs(W_coeffs: Dict[tuple, PadicInt], sc: SplittingCoeffs, w0_max: int) -> Dict[tuple, int]:
    """All coefficients of C with w0 <= w0_max, as slot residues e_w.

    C_w = e_w * pi^(w0 mod (p-1)).  Terms with (p-1)/p^2 * w0 >= N vanish
    mod p^N and are not generated.
    """
    p, N = sc.p, sc.N
    m = p ** N
    e = p - 1
    w0_cap = min(w0_max, math.ceil(Fraction(N * p * p, p - 1)) - 1)
    if w0_cap > sc.n_max:
        raise PrecisionError(f"need splitting coefficients through {w0_cap}, have {sc.n_max}")
    dim = len(next(iter(W_coeffs))) if W_coeffs else 1
    C: Dict[tuple, int] = {(0,) * dim: 1}
    for v, W in sorted(W_coeffs.items()):
        lam = [sc.scaled[k] * pow(W.residue, k, m) % m for k in range(w0_cap + 1)]
        new: Dict[tuple, int] = {}
        for w, val in C.items():
            r0 = w[0] % e
            for k in range(w0_cap - w[0] + 1):
                lk = lam[k]
                if not lk:
                    continue
                x = val * lk
                if r0 + k % e >= e:
                    x = -p * x
                key = tuple(a + k * b for a, b in zip(w, v))
                new[key] = (new.get(key, 0) + x) % m
        C = {k: x for k, x in new.items() if x}
    return C


def truncation_degree(p: int, N: int, guard: Fraction = GUARD) -> int:
    """Least M with gamma*(M+1) >= N, gamma = (p-1)^2/p^2 * (1 - guard)."""
    gamma = Fraction((p - 1) ** 2, p * p) * (1 - guard)
    return max(1, math.ceil(Fraction(N) / gamma) - 1)


def required_precision(p: int, n: int, s_max: int) -> int:
    """Smallest N that pins down N_s exactly for all s <= s_max."""
    best = 1
    for s in range(1, s_max + 1):
        q = p ** s
        bound = (q ** n - 1) // (q - 1)
        k = 0
        while p ** k <= 2 * bound:
            k += 1
        best = max(best, s + k)
    return best


def tail_certificate(p: int, N: int, M: int) -> Fraction:
    """Lower bound for the valuation of any trace term that leaves the truncation.

    A cycle of U-entries visiting a row with u0 = M + 1 contributes at least
    (p-1)^2/p^2 * (M + 1).
    """
    return Fraction((p - 1) ** 2, p * p) * (M + 1)


@dataclass
class UMatrix:
    """Truncated matrix of U on the span of monomial_basis(n, d, M).

    ``graded`` holds the integer matrix in the rescaled basis (residues mod
    p^N); ``c_coeffs`` the slot residues of C used to build it.
    """

    p: int
    N: int
    n: int
    d: int
    M: int
    basis: List[tuple]
    graded: np.ndarray
    c_coeffs: Dict[tuple, int] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    def index(self, v: Sequence[int]) -> int:
        return self._index[tuple(v)]

    def __post_init__(self) -> None:
        self._index = {v: i for i, v in enumerate(self.basis)}
        self._arr = np.array(self.basis, dtype=np.int64).reshape(len(self.basis), self.n + 1)

    def entry(self, u: Sequence[int], v: Sequence[int]) -> PiElem:
        """Entry in the monomial basis: the coefficient C_{p u - v}."""
        w = tuple(self.p * a - b for a, b in zip(u, v))
        if min(w) < 0:
            return PiElem.zero(self.p, self.N)
        e = self.c_coeffs.get(w, 0)
        return PiElem.pi_power(_rho(w[0], self.p), self.p, self.N, coeff=e)

    def sub_indices(self, A: Iterable[int]) -> np.ndarray:
        """Positions of basis vectors with v_i > 0 for every i in A (1-based)."""
        A = list(A)
        if not A:
            return np.arange(self.dim)
        mask = np.all(self._arr[:, A] > 0, axis=1)
        return np.nonzero(mask)[0]

    def pi_matrix(self, zeta: Optional[int] = None) -> np.ndarray:
        """Matrix in the monomial basis as (p-1, dim, dim) slot residues.

        With ``zeta`` given, applies pi -> zeta*pi to every entry.
        """
        return _assemble(self._arr, self.c_coeffs, self.p, self.N, graded=False, zeta=zeta)


def _assemble(
    arr: np.ndarray,
    C: Dict[tuple, int],
    p: int,
    N: int,
    graded: bool,
    zeta: Optional[int] = None,
) -> np.ndarray:
    """Dense matrix with entry (u, v) built from C_{p u - v}.

    ``graded=True``: rescaled basis, entry e_w * (-p)^delta, shape (dim, dim).
    ``graded=False``: monomial basis, e_w placed in slot w0 mod (p-1),
    shape (p-1, dim, dim).
    """
    m = p ** N
    e = p - 1
    dim, width = arr.shape
    use_obj = m >= (1 << 62)
    dtype = object if use_obj else np.int64
    shape = (dim, dim) if graded else (e, dim, dim)
    out = np.zeros(shape, dtype=dtype)
    if not C:
        return out
    keys_list = list(C.keys())
    radix = max(max(k) for k in keys_list) + 1
    if radix ** width >= (1 << 62):
        raise OverflowError("exponent range too large for key encoding")
    weights = np.array([radix ** i for i in range(width)], dtype=np.int64)
    enc = np.array([sum(a * int(b) for a, b in zip(k, weights)) for k in keys_list], dtype=np.int64)
    order = np.argsort(enc, kind="stable")
    skeys = enc[order]
    svals = np.array([C[keys_list[i]] for i in order], dtype=dtype)
    if zeta is not None and pow(zeta, e, m) != 1:
        raise ValueError("zeta must be a (p-1)-th root of unity mod p^N")
    zpow = [pow(zeta, r, m) for r in range(e)] if zeta is not None else None
    rho_v = arr[:, 0] % e
    for i in range(dim):
        u = arr[i]
        Wd = p * u[None, :] - arr
        valid = np.all((Wd >= 0) & (Wd < radix), axis=1)
        if not valid.any():
            continue
        cols = np.nonzero(valid)[0]
        kk = Wd[cols] @ weights
        pos = np.minimum(np.searchsorted(skeys, kk), len(skeys) - 1)
        hit = skeys[pos] == kk
        if not hit.any():
            continue
        cols = cols[hit]
        vals = svals[pos[hit]]
        w0 = p * u[0] - arr[cols, 0]
        if graded:
            delta = (rho_v[cols] + w0 % e - u[0] % e) // e
            if delta.any():
                vals = np.where(delta == 1, (vals * (m - p)) % m, vals)
            out[i, cols] = vals
        else:
            slots = w0 % e
            if zpow is not None:
                factor = np.array([zpow[r] for r in slots], dtype=dtype)
                vals = _mulmod_vec(vals, factor, m)
            out[slots, i, cols] = vals
    return out


def _mulmod_vec(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    if a.dtype == object or m >= (1 << 31):
        return np.array([(int(x) * int(y)) % m for x, y in zip(a, b)], dtype=a.dtype)
    return (a * b) % m


def u_matrix(
    P: HomogeneousPoly,
    p: int,
    N: int,
    M: Optional[int] = None,
    sc: Optional[SplittingCoeffs] = None,
) -> UMatrix:
    """Build the truncated operator for the hypersurface P = 0 in P^(n-1) over F_p."""
    _check_prime(p)
    if M is None:
        M = truncation_degree(p, N)
    n, d = P.n, P.d
    if d < 1:
        raise ValueError("polynomial must have positive degree")
    m = p ** N
    basis = monomial_basis(n, d, M)
    arr = np.array(basis, dtype=np.int64).reshape(len(basis), n + 1)
    w0_max = p * M
    need = min(w0_max, math.ceil(Fraction(N * p * p, p - 1)) - 1)
    if sc is None:
        sc = splitting_coeffs(p, N, max(1, need))
    elif sc.N != N or sc.p != p:
        raise ValueError("splitting coefficients built for a different (p, N)")
    W = delta_lifts(P, p, N)
    C = big_c_coeffs(W, sc, w0_max) if W else {(0,) * (n + 1): 1}

    graded = _assemble(arr, C, p, N, graded=True)
    return UMatrix(p, N, n, d, M, basis, graded, C)


def subset_traces(U: UMatrix, A: Iterable[int], S: int) -> List[PiElem]:
    """tr((U|L_A)^s) for s = 1..S as (pi-free) PiElems."""
    idx = U.sub_indices(A)
    B = U.graded[np.ix_(idx, idx)]
    return [PiElem.scalar(t, U.p, U.N) for t in matpow_traces(B, S, U.modulus)]


def _subsets(n: int):
    for r in range(n + 1):
        for A in itertools.combinations(range(1, n + 1), r):
            yield A


def all_subset_traces(
    U: UMatrix, S: int, route: str = "graded", zeta: Optional[int] = None
) -> Dict[tuple, List[PiElem]]:
    """Traces for every subset A of {1..n}.

    ``route='graded'`` uses the rescaled integer matrix; ``route='pi'`` works
    with the unrescaled matrix over Z_p[pi] (optionally conjugated by pi ->
    zeta*pi), and its traces are genuine PiElems.
    """
    out = {}
    if route == "graded":
        for A in _subsets(U.n):
            out[A] = subset_traces(U, A, S)
        return out
    if route != "pi":
        raise ValueError(f"unknown route {route!r}")
    full = U.pi_matrix(zeta)
    for A in _subsets(U.n):
        idx = U.sub_indices(A)
        B = full[:, idx[:, None], idx[None, :]] if len(idx) < U.dim else full
        out[A] = [PiElem(tuple(c), U.p, U.N) for c in pi_traces(B, S, U.p, U.modulus)]
    return out


def counts_from_traces(traces: Dict[tuple, List[PiElem]], p: int, n: int, s: int) -> int:
    """N_s from the restricted traces at power s (the subset formula above)."""
    N = None
    X = None
    for A, tr in traces.items():
        t = tr[s - 1]
        if not t.is_pi_free():
            raise PrecisionError(f"trace for A={A}, s={s} is not in Z_p: {t}")
        N = t.N
        a_bar = n - len(A)
        term = (-1) ** a_bar * p ** (s * a_bar) * t.coeffs[0]
        X = term if X is None else X + term
    if X is None:
        raise ValueError("no traces supplied")
    if len(traces) != 2 ** n:
        raise ValueError(f"need traces for all {2 ** n} subsets, got {len(traces)}")
    m = p ** N
    X %= m
    if N <= s:
        raise PrecisionError(f"precision N={N} does not exceed s={s}")
    if X % p ** s:
        raise PrecisionError(
            f"subset sum not divisible by p^{s} (valuation {vp_int(X, p) if X else N}); "
            "truncation or precision too small"
        )
    q = p ** s
    G = (q ** (n - 1) - 1) // (q - 1)
    Y = centered_mod(X // q, p ** (N - s))
    Ns = G + (-1) ** n * Y
    bound = (q ** n - 1) // (q - 1)
    if Ns < 0 or Ns > bound:
        raise PrecisionError(f"reconstructed N_{s} = {Ns} outside [0, {bound}]")
    return Ns


@dataclass
class DirectResult:
    p: int
    n: int
    d: int
    N: int
    M: int
    dim: int
    counts: List[Tuple[int, int]]
    traces: Dict[tuple, List[PiElem]] = field(repr=False)


def direct_counts(
    P: HomogeneousPoly,
    p: int,
    s_max: int,
    N: Optional[int] = None,
    M: Optional[int] = None,
    route: str = "graded",
    zeta: Optional[int] = None,
) -> DirectResult:
    """Projective point counts N_1..N_{s_max} of P = 0 by the direct method."""
    need = required_precision(p, P.n, s_max)
    if N is None:
        N = need
    elif N < need:
        raise PrecisionError(f"precision N={N} too small for s <= {s_max}; need {need}")
    if M is None:
        M = truncation_degree(p, N)
    U = u_matrix(P, p, N, M)
    traces = all_subset_traces(U, s_max, route=route, zeta=zeta)
    counts = [(s, counts_from_traces(traces, p, P.n, s)) for s in range(1, s_max + 1)]
    return DirectResult(p, P.n, P.d, N, M, U.dim, counts, traces)


def _ord_factorial(k: int, p: int) -> int:
    out, pk = 0, p
    while pk <= k:
        out += k // pk
        pk *= p
    return out


def fredholm_det(U: UMatrix, M_deg: int, exact_lift: bool = False) -> TruncSeries:
    """det(1 - U T) of the truncated matrix through degree M_deg.

    With ``exact_lift`` the graded matrix is centered-lifted to an integer
    matrix and the result is its exact characteristic series (integers).
    Otherwise traces mod p^N are lifted and coefficient k is only meaningful
    mod p^(N - ord_p(k!)); the result is returned as PadicInts at the common
    precision N - ord_p(M_deg!).
    """
    if M_deg < 0:
        raise ValueError("M_deg must be >= 0")
    if exact_lift:
        m = U.modulus
        A = np.vectorize(lambda x: centered_mod(int(x), m), otypes=[object])(U.graded)
        traces = []
        P = A
        for s in range(1, M_deg + 1):
            if s > 1:
                P = P.dot(A)
            traces.append(int(np.trace(P)))
        return traces_to_charpoly(traces, M_deg)
    prec = U.N - _ord_factorial(M_deg, U.p)
    if prec <= 0:
        raise PrecisionError(
            f"degree {M_deg} needs more than p^{U.N}: ord_p({M_deg}!) = {_ord_factorial(M_deg, U.p)}"
        )
    t = [centered_mod(x, U.modulus) for x in matpow_traces(U.graded, M_deg, U.modulus)]
    series = traces_to_charpoly(t, M_deg)
    out = []
    for c in series.coeffs:
        c = Fraction(c)
        if c.denominator % U.p == 0:
            raise PrecisionError(f"coefficient {c} is not p-integral at precision {U.N}")
        out.append(PadicInt.from_rational(c, U.p, prec))
    return TruncSeries(tuple(out))


def torus_trace_identity(U: UMatrix, torus_count: int, s: int, margin: int = 0) -> bool:
    """Check q^s N*_s = (q^s-1)^n + (q^s-1)^(n+1) tr(U^s) mod p^(N - margin)."""
    q = U.p ** s
    m = U.p ** (U.N - margin)
    t = matpow_traces(U.graded, s, U.modulus)[s - 1]
    lhs = q * torus_count
    rhs = (q - 1) ** U.n + (q - 1) ** (U.n + 1) * t
    return (lhs - rhs) % m == 0


def stability_audit(U: UMatrix) -> bool:
    """Entries from L_A to outside L_A vanish for every subset A."""
    arr = U._arr
    nz = U.graded != 0
    for A in _subsets(U.n):
        if not A:
            continue
        inside = np.all(arr[:, list(A)] > 0, axis=1)
        if np.any(nz[np.ix_(~inside, inside)]):
            return False
    return True
