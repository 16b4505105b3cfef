import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leibhom.complexes import loday_boundary
from leibhom.lie import sl2, trivial_rep
from leibhom.linalg import (
    DimensionMismatch,
    SparseMatrix,
    Vector,
    image_basis,
    kernel_basis,
    matmul,
    rank,
    rank_modular,
    solve,
)
from oracles import dense_rank, explicit_delta


def small_matrices(max_dim=6):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(
                    st.one_of(st.just(0), st.just(0), st.fractions(min_value=-5, max_value=5, max_denominator=4)),
                    min_size=c,
                    max_size=c,
                ),
                min_size=r,
                max_size=r,
            )
        )
    )


def test_rank_examples():
    assert rank(SparseMatrix.identity(3)) == 3
    assert rank(SparseMatrix.from_dense([[1, 2], [2, 4]])) == 1


def test_rank_sl2_loday_delta2():
    g = sl2()
    d2 = loday_boundary(g, trivial_rep(g), 2)
    assert d2.shape == (3, 9)
    # oracle: enumerate delta(e_i ⊗ e_j) = [e_i, e_j] directly
    cols = explicit_delta(g.bracket_basis, 3, 2)
    dense = [[cols[(i, j)].get((k,), 0) for i in range(3) for j in range(3)] for k in range(3)]
    assert dense_rank(dense) == 3
    assert rank(d2) == 3


def test_kernel_examples():
    assert len(kernel_basis(SparseMatrix.zeros(2, 3))) == 3
    assert kernel_basis(SparseMatrix.identity(3)) == []
    (v,) = kernel_basis(SparseMatrix.from_dense([[1, 1]]))
    assert v[0] == -v[1] != 0


def test_image_examples():
    assert len(image_basis(SparseMatrix.identity(2))) == 2
    assert image_basis(SparseMatrix.zeros(3, 2)) == []
    (v,) = image_basis(SparseMatrix.from_dense([[1, 2], [2, 4]]))
    assert v[1] == 2 * v[0] != 0


def test_solve_examples():
    x = solve(SparseMatrix.identity(2), Vector.from_dense([1, 2]))
    assert x == Vector.from_dense([1, 2])
    assert solve(SparseMatrix.zeros(2, 2), Vector.from_dense([1, 0])) is None
    m = SparseMatrix.from_dense([[1, 1]])
    x = solve(m, Vector.from_dense([5]))
    assert x[0] + x[1] == 5
    with pytest.raises(DimensionMismatch):
        solve(m, Vector.from_dense([1, 2]))


def test_matmul_examples():
    m = SparseMatrix.from_dense([[1, 2, 0], [0, Fraction(1, 3), 4]])
    assert matmul(SparseMatrix.identity(2), m) == m
    assert matmul(m, SparseMatrix.zeros(3, 2)).is_zero()
    with pytest.raises(DimensionMismatch):
        matmul(m, m)


def test_sl2_delta2_delta3_compose_to_zero():
    g = sl2()
    t = trivial_rep(g)
    assert matmul(loday_boundary(g, t, 2), loday_boundary(g, t, 3)).is_zero()


def test_no_stored_zeros():
    m = SparseMatrix.from_dense([[0, 1], [0, 0]])
    assert m.entries == {(0, 1): 1}
    assert (m - m).nnz == 0


@settings(max_examples=150, deadline=None)
@given(small_matrices())
def test_rank_matches_dense_oracle(rows):
    m = SparseMatrix.from_dense(rows)
    assert rank(m) == dense_rank(rows)
    assert rank(m) == rank(m.transpose())


@settings(max_examples=100, deadline=None)
@given(small_matrices())
def test_rank_nullity(rows):
    m = SparseMatrix.from_dense(rows)
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.cols
    for v in ker:
        assert m.matvec(v).is_zero()
    if ker:
        assert dense_rank([v.to_dense() for v in ker]) == len(ker)
    img = image_basis(m)
    assert len(img) == rank(m)


@settings(max_examples=100, deadline=None)
@given(small_matrices(), st.data())
def test_solve_roundtrip(rows, data):
    m = SparseMatrix.from_dense(rows)
    x = Vector.from_dense(data.draw(st.lists(st.integers(-3, 3), min_size=m.cols, max_size=m.cols)))
    b = m.matvec(x)
    y = solve(m, b)
    assert y is not None and m.matvec(y) == b


@settings(max_examples=60, deadline=None)
@given(small_matrices(), st.randoms(use_true_random=False))
def test_rank_permutation_invariant(rows, rnd):
    perm_r = list(range(len(rows)))
    perm_c = list(range(len(rows[0])))
    rnd.shuffle(perm_r)
    rnd.shuffle(perm_c)
    shuffled = [[rows[r][c] for c in perm_c] for r in perm_r]
    assert rank(SparseMatrix.from_dense(shuffled)) == rank(SparseMatrix.from_dense(rows))


def test_modular_rank_agrees_on_random_integer_matrices():
    rnd = random.Random(7)
    for _ in range(30):
        r, c = rnd.randint(1, 12), rnd.randint(1, 12)
        rows = [[rnd.choice([0, 0, 0, 1, -1, 2, 3]) for _ in range(c)] for _ in range(r)]
        m = SparseMatrix.from_dense(rows)
        assert rank_modular(m) == rank(m) == dense_rank(rows)


def test_bases_are_deterministic():
    m = SparseMatrix.from_dense([[1, 2, 3, 0], [2, 4, 6, 1]])
    assert kernel_basis(m) == kernel_basis(SparseMatrix.from_dense([[1, 2, 3, 0], [2, 4, 6, 1]]))
    assert image_basis(m) == [m.column(0), m.column(3)]


def test_float_entries_rejected():
    with pytest.raises(TypeError):
        SparseMatrix.from_dense([[0.5]])
