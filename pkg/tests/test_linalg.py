from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from barcat import linalg


def brute_rank(A, p):
    """Dimension of the column space by enumerating all combinations."""
    m, n = A.shape
    span = set()
    for coeffs in product(range(p), repeat=n):
        v = tuple(sum(c * A[i, j] for j, c in enumerate(coeffs)) % p for i in range(m))
        span.add(v)
    k = 0
    while p**k < len(span):
        k += 1
    return k


@st.composite
def matrices(draw, p=None, max_dim=4):
    p = p or draw(st.sampled_from([2, 3]))
    m = draw(st.integers(0, max_dim))
    n = draw(st.integers(0, max_dim))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=m * n, max_size=m * n))
    return linalg.mat(vals, p, (m, n)) if m * n else linalg.zeros(m, n), p


def test_primes():
    assert [q for q in range(20) if linalg.is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]


@given(matrices())
def test_rank_matches_enumeration(Ap):
    A, p = Ap
    assert linalg.rank(A, p) == brute_rank(A, p)


@given(matrices())
def test_nullspace(Ap):
    A, p = Ap
    N = linalg.nullspace(A, p)
    assert N.shape == (A.shape[1], A.shape[1] - linalg.rank(A, p))
    assert not linalg.matmul(A, N, p).any()
    assert linalg.rank(N, p) == N.shape[1]


@given(matrices())
def test_column_basis_and_complement(Ap):
    A, p = Ap
    B = linalg.column_basis(A, p)
    assert B.shape[1] == linalg.rank(A, p) == linalg.rank(B, p)
    E = linalg.complement_basis(B, p)
    full = np.hstack([B, E])
    assert full.shape[1] == A.shape[0] == linalg.rank(full, p)


@given(matrices())
def test_solve_recovers(Ap):
    A, p = Ap
    B = linalg.column_basis(A, p)
    X = linalg.zeros(B.shape[1], 1)
    for i in range(B.shape[1]):
        X[i, 0] = (i + 1) % p
    Y = linalg.matmul(B, X, p)
    assert np.array_equal(linalg.solve(B, Y, p) % p, X % p)


def test_solve_inconsistent():
    A = linalg.mat([[1], [0]], 2)
    with pytest.raises(ValueError):
        linalg.solve(A, linalg.mat([[0], [1]], 2), 2)
