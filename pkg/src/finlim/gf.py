"""Exact matrix arithmetic over prime fields F_q.

Matrices are tuples of row tuples with entries in ``0..q-1``.  Row
reduction goes through numpy int64 arrays; everything else is plain
Python because the matrices involved are tiny.
"""
from __future__ import annotations

import numpy as np

SUPPORTED_PRIMES = (2, 3, 5)


def is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(q ** 0.5) + 1))


def inv(x: int, q: int) -> int:
    return pow(x % q, -1, q)


def reduce(matrix, q: int) -> tuple:
    return tuple(tuple(int(v) % q for v in row) for row in matrix)


def zeros(rows: int, cols: int) -> tuple:
    return tuple((0,) * cols for _ in range(rows))


def identity(n: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(matrix, cols: int | None = None) -> tuple:
    # cols is needed when matrix has no rows
    if not matrix:
        return tuple(() for _ in range(cols or 0))
    return tuple(zip(*matrix))


def matmul(a, b, q: int, inner: int | None = None, cols: int | None = None) -> tuple:
    """Product a·b for a (m×k) and b (k×n).

    ``cols`` gives n when b has no rows (k = 0).
    """
    n = len(b[0]) if b else (cols or 0)
    bt = transpose(b, n)
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) % q for col in bt) for row in a
    )


def matvec(a, v, q: int) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) % q for row in a)


def scale(matrix, k: int, q: int) -> tuple:
    return tuple(tuple(k * v % q for v in row) for row in matrix)


def rref(matrix, q: int, cols: int | None = None):
    """Reduced row echelon form mod q.

    Returns ``(rows, pivots)`` where ``rows`` is an int64 array holding only
    the nonzero rows and ``pivots`` the pivot column of each.
    """
    a = np.array(matrix, dtype=np.int64)
    if a.size == 0:
        n = cols if cols is not None else (a.shape[1] if a.ndim == 2 else 0)
        return np.zeros((0, n), dtype=np.int64), []
    a %= q
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = (a[r] * inv(int(a[r, c]), q)) % q
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % q
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(matrix, q: int) -> int:
    return len(rref(matrix, q)[1])


def kernel_basis(matrix, q: int, cols: int) -> list[tuple]:
    """Basis of {x : matrix·x = 0}, one vector per free column, in column order."""
    reduced, pivots = rref(matrix, q, cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = [0] * cols
        v[free] = 1
        for i, p in enumerate(pivots):
            v[p] = int(-reduced[i, free]) % q
        basis.append(tuple(v))
    return basis


def solve(a, b, q: int, cols: int) -> tuple | None:
    """One solution x of a·x = b (a is m×cols), or None when inconsistent."""
    m = len(a)
    if m == 0:
        return (0,) * cols
    aug = [tuple(row) + (bi,) for row, bi in zip(a, b)]
    reduced, pivots = rref(aug, q, cols + 1)
    if cols in pivots:
        return None
    x = [0] * cols
    for i, p in enumerate(pivots):
        x[p] = int(reduced[i, cols])
    return tuple(x)


def inverse(matrix, q: int) -> tuple | None:
    n = len(matrix)
    if n == 0:
        return ()
    if any(len(row) != n for row in matrix):
        return None
    aug = [tuple(row) + e for row, e in zip(matrix, identity(n))]
    reduced, pivots = rref(aug, q, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return tuple(tuple(int(v) for v in reduced[i, n:]) for i in range(n))


def right_inverse(matrix, q: int, cols: int) -> tuple | None:
    """A matrix r with matrix·r = I for a full-row-rank ``matrix`` (m×cols)."""
    m = len(matrix)
    columns = []
    for j in range(m):
        e = tuple(int(i == j) for i in range(m))
        x = solve(matrix, e, q, cols)
        if x is None:
            return None
        columns.append(x)
    return transpose(tuple(columns), m) if columns else zeros(cols, 0)


def all_vectors(dim: int, q: int):
    """Every vector of F_q^dim in lexicographic order."""
    if dim == 0:
        yield ()
        return
    for head in range(q):
        for tail in all_vectors(dim - 1, q):
            yield (head,) + tail


def all_matrices(rows: int, cols: int, q: int):
    """Every rows×cols matrix over F_q, lexicographic in row-major entries."""
    for flat in all_vectors(rows * cols, q):
        yield tuple(flat[i * cols:(i + 1) * cols] for i in range(rows))
