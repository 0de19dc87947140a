"""Exact modular matrix arithmetic on top of float64 BLAS.

Entries are int64 residues in [0, m).  Operands are split into limbs of b
bits so that every limb product accumulated over a dot product stays below
2^53 and is therefore exact in float64.  Moduli of 2^62 or more fall back
to Python integers in object arrays.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "matmul_mod",
    "dot_mod",
    "dots_mod",
    "trace_product_mod",
    "mulscalar_mod",
    "matpow_traces",
    "pi_matmul",
    "pi_trace_product",
    "pi_traces",
]

_OBJECT_THRESHOLD = 1 << 62


def _limb_bits(length: int, budget: int) -> int:
    return max(1, (budget - max(1, math.ceil(math.log2(max(length, 2))))) // 2)


def _split(a: np.ndarray, b: int, n_limbs: int) -> list:
    mask = (1 << b) - 1
    return [(a >> (b * i)) & mask for i in range(n_limbs)]


def mulscalar_mod(a: np.ndarray, c: int, m: int) -> np.ndarray:
    """(a * c) mod m for residues a in [0, m) and a Python integer c."""
    c %= m
    if a.dtype == object or m >= _OBJECT_THRESHOLD:
        return (a.astype(object) * c) % m
    if m < (1 << 31):
        return (a * c) % m
    return np.array((a.astype(object) * c) % m, dtype=np.int64)


def matmul_mod(A: np.ndarray, B: np.ndarray, m: int) -> np.ndarray:
    """Exact (A @ B) mod m."""
    if A.dtype == object or B.dtype == object or m >= _OBJECT_THRESHOLD:
        return (A.astype(object).dot(B.astype(object))) % m
    inner = A.shape[1]
    if inner == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    b = _limb_bits(inner, 52)
    n_limbs = max(1, math.ceil((m - 1).bit_length() / b))
    Al = [x.astype(np.float64) for x in _split(A, b, n_limbs)]
    Bl = [x.astype(np.float64) for x in _split(B, b, n_limbs)]
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(2 * n_limbs - 1):
        acc = np.zeros_like(out)
        for i in range(max(0, k - n_limbs + 1), min(k, n_limbs - 1) + 1):
            acc = (acc + np.rint(Al[i] @ Bl[k - i]).astype(np.int64) % m) % m
        out = (out + mulscalar_mod(acc, pow(2, b * k, m), m)) % m
    return out


def dots_mod(X: np.ndarray, Y: np.ndarray, m: int) -> np.ndarray:
    """All pairwise dot products of the rows of X and Y, mod m, as an object array."""
    k, length = X.shape
    if length == 0:
        return np.zeros((k, Y.shape[0]), dtype=object)
    if X.dtype == object or Y.dtype == object or m >= _OBJECT_THRESHOLD:
        return (X.astype(object).dot(Y.astype(object).T)) % m
    b = _limb_bits(length, 62)
    n_limbs = max(1, math.ceil((m - 1).bit_length() / b))
    Xl = _split(X, b, n_limbs) if n_limbs > 1 else [X]
    Yl = _split(Y, b, n_limbs) if n_limbs > 1 else [Y]
    total = np.zeros((k, Y.shape[0]), dtype=object)
    for i in range(n_limbs):
        for j in range(n_limbs):
            part = (Xl[i] @ Yl[j].T).astype(object)
            total = total + part * (1 << (b * (i + j)))
    return total % m


def dot_mod(x: np.ndarray, y: np.ndarray, m: int) -> int:
    """Exact sum(x * y) mod m for equal-shape residue arrays."""
    x = np.ascontiguousarray(x).reshape(1, -1)
    y = np.ascontiguousarray(y).reshape(1, -1)
    return int(dots_mod(x, y, m)[0, 0])


def trace_product_mod(A: np.ndarray, B: np.ndarray, m: int) -> int:
    """tr(A @ B) mod m without forming the product."""
    return dot_mod(A, B.T, m)


def matpow_traces(A: np.ndarray, S: int, m: int) -> list:
    """[tr(A^s) mod m for s = 1..S], forming only powers up to ceil(S/2)."""
    if S < 1:
        return []
    half = (S + 1) // 2
    powers = [None, A]
    for _ in range(2, half + 1):
        powers.append(matmul_mod(powers[-1], A, m))
    out = []
    for s in range(1, S + 1):
        if s == 1:
            out.append(int(sum(int(x) for x in np.diagonal(A))) % m)
        else:
            i = s // 2
            out.append(trace_product_mod(powers[i], powers[s - i], m))
    return out


# Matrices over Z_p[pi]/(pi^(p-1) + p): arrays of shape (p-1, rows, cols),
# slice i holding the coefficient of pi^i.

def _pi_combine(parts: dict, p: int, m: int, shape) -> np.ndarray:
    e = p - 1
    out = np.zeros((e,) + shape, dtype=np.int64)
    for k, val in parts.items():
        if k >= e:
            out[k - e] = (out[k - e] + mulscalar_mod(val, -p, m)) % m
        else:
            out[k] = (out[k] + val) % m
    return out


def pi_matmul(A: np.ndarray, B: np.ndarray, p: int, m: int) -> np.ndarray:
    e = p - 1
    parts: dict = {}
    nzA = [i for i in range(e) if A[i].any()]
    nzB = [j for j in range(e) if B[j].any()]
    for i in nzA:
        for j in nzB:
            prod = matmul_mod(A[i], B[j], m)
            parts[i + j] = (parts.get(i + j, 0) + prod) % m
    return _pi_combine(parts, p, m, (A.shape[1], B.shape[2]))


def pi_trace_product(A: np.ndarray, B: np.ndarray, p: int, m: int) -> list:
    """tr(A @ B) as p-1 residues (coefficients of pi^i)."""
    e = p - 1
    Af = np.ascontiguousarray(A).reshape(e, -1)
    Bf = np.ascontiguousarray(B.transpose(0, 2, 1)).reshape(e, -1)
    T = dots_mod(Af, Bf, m)
    out = [0] * e
    for i in range(e):
        for j in range(e):
            t = int(T[i, j])
            if i + j >= e:
                out[i + j - e] = (out[i + j - e] - p * t) % m
            else:
                out[i + j] = (out[i + j] + t) % m
    return out


def pi_traces(A: np.ndarray, S: int, p: int, m: int) -> list:
    """[tr(A^s) for s = 1..S] as lists of p-1 residues."""
    if S < 1:
        return []
    half = (S + 1) // 2
    powers = [None, A]
    for _ in range(2, half + 1):
        powers.append(pi_matmul(powers[-1], A, p, m))
    out = []
    for s in range(1, S + 1):
        if s == 1:
            out.append([int(np.sum(np.diagonal(A[i]) % m)) % m for i in range(p - 1)])
        else:
            i = s // 2
            out.append(pi_trace_product(powers[i], powers[s - i], p, m))
    return out
