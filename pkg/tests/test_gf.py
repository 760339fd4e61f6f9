import itertools

import pytest
from hypothesis import given, strategies as st

from finlim import gf


def brute_kernel(matrix, q, cols):
    return [v for v in itertools.product(range(q), repeat=cols)
            if all(sum(a * b for a, b in zip(row, v)) % q == 0 for row in matrix)]


def span(vectors, q, dim):
    out = set()
    for coeffs in itertools.product(range(q), repeat=len(vectors)):
        out.add(tuple(sum(c * v[i] for c, v in zip(coeffs, vectors)) % q for i in range(dim)))
    return out or {tuple([0] * dim)}


matrices = st.sampled_from(gf.SUPPORTED_PRIMES).flatmap(
    lambda q: st.tuples(st.just(q), st.integers(0, 3), st.integers(1, 4)).flatmap(
        lambda t: st.tuples(
            st.just(t[0]),
            st.lists(st.lists(st.integers(0, t[0] - 1), min_size=t[2], max_size=t[2]),
                     min_size=t[1], max_size=t[1]),
            st.just(t[2]),
        )
    )
)


@given(matrices)
def test_kernel_basis_spans_brute_force_kernel(data):
    q, rows, cols = data
    matrix = tuple(tuple(r) for r in rows)
    basis = gf.kernel_basis(matrix, q, cols)
    assert span(basis, q, cols) == set(brute_kernel(matrix, q, cols))
    assert len(basis) == cols - gf.rank(matrix, q) if matrix else len(basis) == cols


@given(matrices)
def test_solve_matches_brute_force(data):
    q, rows, cols = data
    matrix = tuple(tuple(r) for r in rows)
    if not matrix:
        return
    target = tuple(sum(row) % q for row in matrix)  # image of the all-ones vector
    x = gf.solve(matrix, target, q, cols)
    assert x is not None
    assert gf.matvec(matrix, x, q) == target


def test_solve_reports_inconsistent_system():
    assert gf.solve(((1, 1), (1, 1)), (0, 1), 2, 2) is None


def test_inverse_of_invertible_matrices_f3():
    for m in gf.all_matrices(2, 2, 3):
        inv = gf.inverse(m, 3)
        if gf.rank(m, 3) == 2:
            assert gf.matmul(m, inv, 3) == gf.identity(2)
        else:
            assert inv is None


def test_right_inverse():
    a = ((1, 1, 0), (0, 1, 1))
    r = gf.right_inverse(a, 2, 3)
    assert gf.matmul(a, r, 2) == gf.identity(2)
    assert gf.right_inverse(((1, 1), (1, 1)), 2, 2) is None


def test_enumerators_are_lexicographic_and_complete():
    vecs = list(gf.all_vectors(2, 3))
    assert vecs == sorted(vecs) and len(vecs) == 9
    assert len(list(gf.all_matrices(2, 3, 2))) == 64


@pytest.mark.parametrize("q", [4, 6, 7])
def test_unsupported_moduli_rejected(q):
    from finlim.errors import DiagramError
    from finlim.vectors import Field
    with pytest.raises(DiagramError):
        Field(q)
