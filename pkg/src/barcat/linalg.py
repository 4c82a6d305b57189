"""Exact linear algebra over a prime field F_p.

Matrices are numpy arrays of Python ints (``dtype=object``) so that no
overflow can occur for any prime.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "is_prime",
    "mat",
    "zeros",
    "eye",
    "matmul",
    "rref",
    "rank",
    "nullspace",
    "column_basis",
    "complement_basis",
    "solve",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def mat(rows, p: int, shape=None) -> np.ndarray:
    A = np.array(rows, dtype=object)
    if shape is not None:
        A = A.reshape(shape)
    return A % p if A.size else A


def zeros(m: int, n: int) -> np.ndarray:
    return np.zeros((m, n), dtype=object)


def eye(n: int) -> np.ndarray:
    A = zeros(n, n)
    for i in range(n):
        A[i, i] = 1
    return A


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.shape[0] == 0 or B.shape[1] == 0 or A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    return (A.dot(B)) % p


def rref(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = (A.copy() % p) if A.size else A.copy()
    m, n = R.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if R[i, c] % p), None)
        if piv is None:
            continue
        if piv != r:
            R[[r, piv], :] = R[[piv, r], :]
        inv = pow(int(R[r, c]), -1, p)
        R[r, :] = (R[r, :] * inv) % p
        for i in range(m):
            if i != r and R[i, c] % p:
                R[i, :] = (R[i, :] - R[i, c] * R[r, :]) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning ``{x : A x = 0}``."""
    m, n = A.shape
    if m == 0:
        return eye(n)
    R, pivots = rref(A, p)
    free = [c for c in range(n) if c not in pivots]
    N = zeros(n, len(free))
    for k, f in enumerate(free):
        N[f, k] = 1
        for row, pc in enumerate(pivots):
            N[pc, k] = (-R[row, f]) % p
    return N


def column_basis(A: np.ndarray, p: int) -> np.ndarray:
    """Linearly independent columns of ``A`` spanning its column space."""
    if A.size == 0:
        return zeros(A.shape[0], 0)
    _, pivots = rref(A, p)
    return A[:, pivots] % p


def complement_basis(B: np.ndarray, p: int) -> np.ndarray:
    """Standard basis vectors completing the independent columns of ``B`` to a basis."""
    n = B.shape[0]
    I = eye(n)
    _, pivots = rref(np.hstack([B, I]), p)
    k = B.shape[1]
    chosen = [c - k for c in pivots if c >= k]
    return I[:, chosen]


def solve(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """The unique ``X`` with ``A X = B``; ``A`` must have independent columns."""
    m, n = A.shape
    k = B.shape[1]
    if n == 0:
        if B.size and (B % p).any():
            raise ValueError("inconsistent system")
        return zeros(0, k)
    R, pivots = rref(np.hstack([A, B]), p)
    if pivots[:n] != list(range(n)) or any(c >= n for c in pivots):
        raise ValueError("system is singular or inconsistent")
    return R[:n, n:]
