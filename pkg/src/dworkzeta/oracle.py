"""Brute-force point counting over F_{p^s}.

Field elements are handled through discrete logarithms with respect to a
fixed generator g: a nonzero element is its exponent k in 0..q-2 and zero is
the sentinel q-1.  Products add exponents; sums use Zech's table
Z(k) = log(1 + g^k).  Everything is vectorised over numpy arrays of
exponents, so a scan never touches Python-level field objects.

Polynomial-basis encoding of an element: sum c_i p^i with c_i the
coefficient of x^i modulo the defining polynomial.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .padic import _check_prime
from .poly import HomogeneousPoly

__all__ = [
    "FqTable",
    "ff_build",
    "count_projective",
    "count_torus",
    "count_affine",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 1 << 26
_INNER_LIMIT = 1 << 21


def _poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> list:
    """Product of two digit vectors (low degree first) modulo monic f."""
    s = len(f) - 1
    prod = [0] * (2 * s - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, s - 1, -1):
        c = prod[k] % p
        if c:
            for i in range(s + 1):
                prod[k - s + i] -= c * f[i]
    return [x % p for x in prod[:s]]


def _digits(x: int, p: int, s: int) -> list:
    out = []
    for _ in range(s):
        x, r = divmod(x, p)
        out.append(r)
    return out


def _encode(d: Sequence[int], p: int) -> int:
    return sum(c * p ** i for i, c in enumerate(d))


def _poly_powmod(a: list, e: int, f: list, p: int) -> list:
    s = len(f) - 1
    result = [1] + [0] * (s - 1)
    while e:
        if e & 1:
            result = _poly_mulmod(result, a, f, p)
        a = _poly_mulmod(a, a, f, p)
        e >>= 1
    return result


def _prime_factors(n: int) -> list:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _least_irreducible(p: int, s: int) -> list:
    """Least monic irreducible of degree s, ordered by sum c_i p^i."""
    if s == 1:
        return [0, 1]
    from sympy import ZZ
    from sympy.polys.galoistools import gf_irreducible_p

    for code in range(p ** s):
        low = _digits(code, p, s)
        coeffs_high_first = [1] + low[::-1]
        if gf_irreducible_p(coeffs_high_first, p, ZZ):
            return low + [1]
    raise RuntimeError(f"no irreducible polynomial of degree {s} over F_{p}")


def _mult_matrix(h: list, f: list, p: int) -> np.ndarray:
    """Matrix of multiplication by h on digit vectors (row-vector convention)."""
    s = len(f) - 1
    rows = []
    for i in range(s):
        basis = [0] * s
        basis[i] = 1
        rows.append(_poly_mulmod(basis, h, f, p))
    return np.array(rows, dtype=np.int64)


@dataclass(frozen=True)
class FqTable:
    """Log/exp/Zech tables for F_q, q = p^s."""

    p: int
    s: int
    modulus: tuple  # digits of the defining polynomial, low degree first, monic
    generator: int  # polynomial-basis encoding of g
    exp: np.ndarray = field(repr=False)  # exp[k] = encoding of g^k, k < q-1
    log: np.ndarray = field(repr=False)  # log[encoding], log[0] = ZERO
    zech: np.ndarray = field(repr=False)  # zech[k] = log(1 + g^k)

    @property
    def q(self) -> int:
        return self.p ** self.s

    @property
    def order(self) -> int:
        return self.q - 1

    @property
    def ZERO(self) -> int:
        return self.q - 1

    def log_of_int(self, c: int) -> int:
        """Log of the prime-field element c mod p."""
        return int(self.log[c % self.p])

    def mul(self, a: int, b: int) -> int:
        """Product of two encoded elements."""
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % self.order])

    def add(self, a: int, b: int) -> int:
        da, db = _digits(a, self.p, self.s), _digits(b, self.p, self.s)
        return _encode([(x + y) % self.p for x, y in zip(da, db)], self.p)

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        return int(self.exp[(int(self.log[a]) * e) % self.order])

    def add_logs(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Vectorised sum of two arrays of logs."""
        Z = self.ZERO
        out = np.where(a == Z, b, a)
        both = (a != Z) & (b != Z)
        if both.any():
            aa = a[both]
            d = (b[both] - aa) % self.order
            z = self.zech[d]
            out[both] = np.where(z == Z, Z, (aa + z) % self.order)
        return out


def ff_build(p: int, s: int, cap: int = DEFAULT_CAP) -> FqTable:
    """Deterministic tables for F_{p^s}: least irreducible modulus, least generator."""
    _check_prime(p)
    if s < 1:
        raise ValueError("degree s must be >= 1")
    q = p ** s
    if q > cap:
        raise MemoryError(
            f"q = {q} exceeds the table cap {cap}; raise the cap or count over a smaller field"
        )
    f = _least_irreducible(p, s)
    order = q - 1
    primes = _prime_factors(order)
    one = [1] + [0] * (s - 1)
    gen = None
    for code in range(1, q):
        g = _digits(code, p, s)
        if all(_poly_powmod(g, order // r, f, p) != one for r in primes):
            gen = code
            break
    if gen is None:
        raise RuntimeError("no generator found")
    g = _digits(gen, p, s)

    # exp table in blocks: sequential powers up to B, then block shifts by g^B
    B = max(1, int(order ** 0.5))
    first = [one]
    for _ in range(B - 1):
        first.append(_poly_mulmod(first[-1], g, f, p))
    block = np.array(first, dtype=np.int64)
    shift = _mult_matrix(_poly_powmod(g, B, f, p), f, p)
    weights = np.array([p ** i for i in range(s)], dtype=np.int64)
    chunks = []
    total = 0
    while total < order:
        chunks.append(block @ weights)
        total += len(block)
        block = (block @ shift) % p
    exp = np.concatenate(chunks)[:order]
    log = np.full(q, order, dtype=np.int64)
    log[exp] = np.arange(order, dtype=np.int64)
    if log[1] != 0 or np.count_nonzero(log[1:] == order) != 0:
        raise RuntimeError("generator does not cover the multiplicative group")
    if int(exp[0]) != 1 or (order > 1 and np.any(exp[1:] == 1)):
        raise RuntimeError("generator order check failed")
    c0 = exp % p
    plus_one = exp - c0 + (c0 + 1) % p
    zech = log[plus_one]
    return FqTable(p, s, tuple(f), gen, exp, log, zech)


def _term_logs(f: HomogeneousPoly, table: FqTable) -> list:
    out = []
    for exps, c in f.terms:
        if c % table.p:
            out.append((exps, table.log_of_int(c)))
    return out


def _eval_zero_count(terms: list, coords: List[np.ndarray], table: FqTable, size: int) -> int:
    """Number of points (given as log arrays, one per variable) where f vanishes."""
    Z = table.ZERO
    order = table.order
    acc = np.full(size, Z, dtype=np.int64)
    for exps, cl in terms:
        val = np.full(size, cl, dtype=np.int64)
        dead = np.zeros(size, dtype=bool)
        for x, e in zip(coords, exps):
            if e == 0:
                continue
            if np.ndim(x) == 0:
                if x == Z:
                    dead[:] = True
                else:
                    val = val + e * int(x)
            else:
                dead |= x == Z
                val = val + e * np.where(x == Z, 0, x)
        val %= order
        val[dead] = Z
        acc = table.add_logs(acc, val)
    return int(np.count_nonzero(acc == Z))


def _grid(values: np.ndarray, k: int) -> List[np.ndarray]:
    if k == 0:
        return []
    mesh = np.meshgrid(*([values] * k), indexing="ij")
    return [m.ravel() for m in mesh]


def _scan(terms, fixed: list, free: int, values: np.ndarray, table: FqTable, workers: int) -> int:
    """Count zeros over points whose first coordinates are ``fixed`` (logs) and
    whose last ``free`` coordinates range over ``values``."""
    if free == 0:
        coords = [np.array([x]) for x in fixed]
        return _eval_zero_count(terms, coords, table, 1)
    inner = free
    while inner > 0 and len(values) ** inner > _INNER_LIMIT:
        inner -= 1
    inner = max(inner, 1)
    outer = free - inner
    grid = _grid(values, inner)
    size = len(grid[0])

    def work(prefix) -> int:
        coords = [np.int64(x) for x in fixed] + [np.int64(x) for x in prefix] + grid
        return _eval_zero_count(terms, coords, table, size)

    prefixes = list(itertools.product(values.tolist(), repeat=outer))
    if workers > 1 and len(prefixes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return sum(ex.map(work, prefixes))
    return sum(work(pre) for pre in prefixes)


def count_projective(f: HomogeneousPoly, table: FqTable, workers: int = 1) -> int:
    """#{x in P^(n-1)(F_q) : f(x) = 0}, scanning normalized representatives."""
    if f.terms and f.d < 1:
        raise ValueError("a nonzero constant has no projective zeros to count")
    terms = _term_logs(f, table)
    Z = table.ZERO
    values = np.concatenate([[Z], np.arange(table.order)]).astype(np.int64)
    total = 0
    for lead in range(f.n):
        fixed = [Z] * lead + [0]
        total += _scan(terms, fixed, f.n - lead - 1, values, table, workers)
    return total


def count_torus(
    f: HomogeneousPoly,
    table: FqTable,
    support: Optional[Sequence[int]] = None,
    workers: int = 1,
) -> int:
    """#{x in (F_q^*)^n : f(x) = 0}.

    With ``support`` (0-based variable indices) only those coordinates range
    over F_q^*; the others are fixed to zero, and the count is over the
    support coordinates.
    """
    terms = _term_logs(f, table)
    Z = table.ZERO
    support = list(range(f.n)) if support is None else sorted(support)
    if not support:
        return 1 if not terms else _eval_zero_count(terms, [np.array([Z])] * f.n, table, 1)
    # reorder: zero coordinates first so they are the fixed prefix
    perm = [i for i in range(f.n) if i not in support] + support
    permuted = [(tuple(exps[i] for i in perm), cl) for exps, cl in terms]
    values = np.arange(table.order, dtype=np.int64)
    fixed = [Z] * (f.n - len(support))
    return _scan(permuted, fixed, len(support), values, table, workers)


def count_affine(f: HomogeneousPoly, table: FqTable, workers: int = 1) -> int:
    """#{x in F_q^n : f(x) = 0}."""
    terms = _term_logs(f, table)
    Z = table.ZERO
    values = np.concatenate([[Z], np.arange(table.order)]).astype(np.int64)
    return _scan(terms, [], f.n, values, table, workers)
