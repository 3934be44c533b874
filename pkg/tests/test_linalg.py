"""Exact linear algebra: GF(2) bit-packed matrices and integer Smith form."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from khseq.linalg import (
    F2Matrix,
    F2Span,
    ZMatrix,
    echelon_reduce,
    f2_rank_kernel,
    integer_block_homology,
    mod4_lift_boundary,
    smith_normal_form,
    solve_f2,
    z_matmul,
    z_rank,
)

from oracles import f2_rank_dense, smith_diagonal_naive


def dense_of(m):
    return [[m.entry(i, c) for c in range(m.cols)] for i in range(m.rows)]


def test_f2_matrix_basics():
    m = F2Matrix.from_dense([[1, 0, 1], [0, 1, 1]])
    assert (m.rows, m.cols) == (2, 3)
    assert m.entry(0, 2) == 1 and m.entry(1, 0) == 0
    assert m.column(2) == 0b11
    # packed input is masked to the declared width
    assert F2Matrix(1, 2, [0b111]).data == [0b11]
    with pytest.raises(ValueError):
        F2Matrix(3, 2, [0, 1])


def test_f2_transpose_matmul():
    m = F2Matrix.from_dense([[1, 1, 0], [0, 1, 1]])
    t = m.transpose()
    assert dense_of(t) == [[1, 0], [1, 1], [0, 1]]
    # (m t)_{ik} = sum_j m_{ij} m_{kj} mod 2
    p = m.matmul(t)
    assert dense_of(p) == [[0, 1], [1, 0]]
    ident = F2Matrix.identity(3)
    assert m.matmul(ident) == m
    with pytest.raises(ValueError):
        m.matmul(m)


def test_f2_mul_vec_matches_columns():
    rng = random.Random(11)
    for _ in range(50):
        rows = rng.randrange(1, 7)
        cols = rng.randrange(1, 7)
        m = F2Matrix(rows, cols, [rng.getrandbits(cols) for _ in range(rows)])
        x = rng.getrandbits(cols)
        acc = 0
        for c in range(cols):
            if (x >> c) & 1:
                acc ^= m.column(c)
        assert m.mul_vec(x) == acc


def test_f2_rank_kernel_golden():
    rank, ker = f2_rank_kernel(F2Matrix.from_dense([[1, 1, 0], [0, 0, 1]]))
    assert rank == 2
    assert ker == [0b011]
    assert f2_rank_kernel(F2Matrix.zero(2, 3)) == (0, [0b001, 0b010, 0b100])
    assert f2_rank_kernel(F2Matrix.identity(4)) == (4, [])


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_f2_rank_matches_dense_oracle(rows, cols, seed):
    rng = random.Random(seed)
    grid = [[rng.randrange(2) for _ in range(cols)] for _ in range(rows)]
    m = F2Matrix.from_dense(grid)
    rank, ker = f2_rank_kernel(m)
    assert rank == f2_rank_dense(grid)
    assert rank + len(ker) == cols
    for v in ker:
        assert m.mul_vec(v) == 0
    # kernel vectors are independent: each has a private free-column bit
    assert f2_rank_dense([[(v >> c) & 1 for c in range(cols)] for v in ker]) == len(ker)


def test_f2_rank_kernel_deterministic():
    m = F2Matrix.from_dense([[1, 0, 1, 1], [1, 1, 0, 0], [0, 1, 1, 1]])
    assert f2_rank_kernel(m) == f2_rank_kernel(m)


def test_f2_span_expression_tracking():
    span = F2Span()
    assert span.add(0b011)
    assert span.add(0b110)
    assert not span.add(0b101)  # dependent on the first two
    assert span.dim == 2
    assert span.contains(0b101)
    assert not span.contains(0b100)
    combo = span.express(0b101)
    assert combo == 0b11
    acc = 0
    for i, v in enumerate([0b011, 0b110]):
        if (combo >> i) & 1:
            acc ^= v
    assert acc == 0b101
    assert span.express(0b001) is None
    assert span.reduce(0b011) == 0
    assert span.reduce(0) == 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 255), min_size=1, max_size=10), st.integers(0, 255))
def test_f2_span_express_roundtrip(vectors, target):
    span = F2Span()
    for v in vectors:
        span.add(v)
    combo = span.express(target)
    if combo is None:
        assert not span.contains(target)
    else:
        acc = 0
        for i, v in enumerate(vectors):
            if (combo >> i) & 1:
                acc ^= v
        assert acc == target


def test_solve_f2():
    m = F2Matrix.from_dense([[1, 1, 0], [0, 1, 1]])
    x = solve_f2(m, 0b11)
    assert x is not None and m.mul_vec(x) == 0b11
    # columns of tall span {0, 0b101, 0b110, 0b011}; 0b001 is outside
    tall = F2Matrix.from_dense([[1, 0], [0, 1], [1, 1]])
    assert solve_f2(tall, 0b001) is None
    assert solve_f2(tall, 0b011) is not None


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_solve_f2_consistency(rows, cols, seed):
    rng = random.Random(seed)
    m = F2Matrix(rows, cols, [rng.getrandbits(cols) for _ in range(rows)])
    b = rng.getrandbits(rows)
    x = solve_f2(m, b)
    if x is None:
        # b must enlarge the column span
        cols_span = F2Span()
        for c in range(cols):
            cols_span.add(m.column(c))
        assert not cols_span.contains(b)
    else:
        assert m.mul_vec(x) == b


def test_echelon_reduce():
    basis = echelon_reduce([0b110, 0b011, 0b101, 0])
    assert len(basis) == 2
    seen = set()
    for v in basis:
        assert v
        lead = v.bit_length() - 1
        assert lead not in seen
        seen.add(lead)
    # same span
    span = F2Span()
    for v in (0b110, 0b011, 0b101):
        span.add(v)
    for v in basis:
        assert span.contains(v)
    assert span.dim == len(basis)
    assert echelon_reduce([]) == []


def test_zmatrix_shape_and_mod2():
    with pytest.raises(ValueError):
        ZMatrix(2, 2, [[1, 2, 3], [4, 5, 6]])
    m = ZMatrix(2, 2, [[3, -2], [0, 5]])
    assert m.mod2() == F2Matrix.from_dense([[1, 0], [0, 1]])
    assert m == ZMatrix(2, 2, [[3, -2], [0, 5]])
    assert m != ZMatrix.identity(2)
    prod = z_matmul(m, ZMatrix.identity(2))
    assert prod == m
    with pytest.raises(ValueError):
        z_matmul(m, ZMatrix.zero(3, 1))


def test_smith_golden():
    d, _ = smith_normal_form(ZMatrix(2, 2, [[2, 0], [0, 3]]))
    assert d == [1, 6]
    d, _ = smith_normal_form(ZMatrix(3, 3, [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]))
    assert d == [2, 2, 156]
    d, _ = smith_normal_form(ZMatrix.zero(2, 3))
    assert d == [0, 0]


def _embed_diag(diag, rows, cols):
    out = [[0] * cols for _ in range(rows)]
    for i, v in enumerate(diag):
        out[i][i] = v
    return ZMatrix(rows, cols, out)


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_smith_matches_naive_oracle(rows, cols, seed):
    rng = random.Random(seed)
    grid = [[rng.randrange(-9, 10) for _ in range(cols)] for _ in range(rows)]
    m = ZMatrix(rows, cols, grid)
    diag, (u, v) = smith_normal_form(m)
    assert diag == smith_diagonal_naive(grid)
    for a, b in zip(diag, diag[1:]):
        if b:
            assert a and b % a == 0
        assert a >= 0 and b >= 0
    # U m V really is the diagonal matrix
    assert z_matmul(z_matmul(u, m), v) == _embed_diag(diag, rows, cols)
    # transforms are unimodular: all invariant factors are 1
    assert smith_normal_form(u)[0] == [1] * rows
    assert smith_normal_form(v)[0] == [1] * cols


def test_z_rank():
    assert z_rank(ZMatrix.identity(3)) == 3
    assert z_rank(ZMatrix.zero(2, 2)) == 0
    # rank 1: second row is a multiple of the first
    assert z_rank(ZMatrix(2, 2, [[2, 4], [3, 6]])) == 1
    # integer rank ignores torsion: [[2]] has rational rank 1
    assert z_rank(ZMatrix(1, 1, [[2]])) == 1


def test_integer_block_homology_golden():
    # single Z summand: no maps at all
    free, torsion = integer_block_homology(ZMatrix.zero(1, 1), ZMatrix.zero(1, 1))
    assert (free, torsion) == (1, [])
    # Z/2: d_in multiplies by 2
    free, torsion = integer_block_homology(ZMatrix.zero(1, 1), ZMatrix(1, 1, [[2]]))
    assert (free, torsion) == (0, [2])
    # acyclic: d_out an isomorphism
    free, torsion = integer_block_homology(ZMatrix(1, 1, [[1]]), ZMatrix.zero(1, 1))
    assert (free, torsion) == (0, [])
    # mixed block: x -> 0 with 2x in the image, y killed by d_out
    d_in = ZMatrix(2, 1, [[2], [0]])
    d_out = ZMatrix(1, 2, [[0, 1]])
    assert integer_block_homology(d_out, d_in) == (0, [2])
    with pytest.raises(ValueError):
        integer_block_homology(ZMatrix.zero(1, 2), ZMatrix.zero(1, 1))
    with pytest.raises(ValueError):
        # d_out injective and d_in surjective on a 1-dim block cannot compose to 0
        integer_block_homology(ZMatrix(1, 1, [[1]]), ZMatrix(1, 1, [[1]]))


def test_mod4_lift_boundary():
    # d(x) = 2 y: the halved boundary of x is y
    d4 = ZMatrix(1, 1, [[2]])
    assert mod4_lift_boundary(0b1, d4) == 0b1
    # d(x) = 4 y = 0 mod 4: halved boundary vanishes
    assert mod4_lift_boundary(0b1, ZMatrix(1, 1, [[4]])) == 0
    # two coordinates whose odd images cancel mod 2 but sum to 2 mod 4
    d4 = ZMatrix(1, 2, [[1, 1]])
    assert mod4_lift_boundary(0b11, d4) == 0b1
    assert mod4_lift_boundary(0b00, d4) == 0
    with pytest.raises(ValueError):
        mod4_lift_boundary(0b01, d4)


def test_doctests():
    import doctest

    import khseq.linalg as mod

    failures, _ = doctest.testmod(mod)
    assert failures == 0
