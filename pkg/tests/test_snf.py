import random

from hypothesis import given, settings
from hypothesis import strategies as st

from perilink.snf import (
    invariant_factor_chain,
    mat_mul,
    smith_normal_form,
    sparse_elimination,
)


def check_reconstruction(a, res):
    m, n = len(a), len(a[0]) if a else 0
    assert mat_mul(mat_mul(res.u, a), res.v) == res.d
    assert mat_mul(res.u, res.u_inv) == [[1 if i == j else 0 for j in range(m)]
                                         for i in range(m)]
    assert mat_mul(res.v, res.v_inv) == [[1 if i == j else 0 for j in range(n)]
                                         for i in range(n)]
    # U^-1 D V^-1 == A
    assert mat_mul(mat_mul(res.u_inv, res.d), res.v_inv) == a


def test_identity():
    a = [[1, 0], [0, 1]]
    res = smith_normal_form(a)
    assert res.d == a
    check_reconstruction(a, res)


def test_hand_example():
    a = [[2, 4], [6, 8]]
    res = smith_normal_form(a)
    assert res.invariant_factors() == [2, 4]
    check_reconstruction(a, res)


def test_zero_matrix():
    a = [[0, 0, 0], [0, 0, 0]]
    res = smith_normal_form(a)
    assert res.d == a
    check_reconstruction(a, res)


def test_divisibility_chain():
    a = [[2, 0], [0, 3]]
    res = smith_normal_form(a)
    assert res.invariant_factors() == [1, 6]
    check_reconstruction(a, res)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 10 ** 6))
def test_random_dense(m, n, seed):
    rnd = random.Random(seed)
    a = [[rnd.randint(-9, 9) for _ in range(n)] for _ in range(m)]
    res = smith_normal_form(a)
    check_reconstruction(a, res)
    diag = res.invariant_factors()
    for i in range(len(diag) - 1):
        assert diag[i + 1] % diag[i] == 0
    assert all(x > 0 for x in diag)


def to_columns(a):
    cols = {}
    for i, row in enumerate(a):
        for j, v in enumerate(row):
            if v:
                cols.setdefault(j, {})[i] = v
    return cols


def materialize_from_pivots(elim, a):
    """Check that replaying row ops on each matrix column matches the pivot
    lattice description: pivot columns become v*e_r plus junk at earlier
    unit-pivot rows, other columns vanish wherever rows were never pivoted."""
    m, n = len(a), len(a[0]) if a else 0
    pivot_rows = {p.row: p for p in elim.pivots}
    pivot_cols = {p.col: p for p in elim.pivots}
    for j in range(n):
        col = {i: a[i][j] for i in range(m) if a[i][j]}
        y = elim.apply_row_ops(col)
        for r, v in y.items():
            if v == 0:
                continue
            assert r in pivot_rows, (
                f"column {j} has residue at non-pivot row {r}")


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 10 ** 6))
def test_sparse_vs_dense_factors(m, n, seed):
    rnd = random.Random(seed)
    a = [[rnd.choice([0, 0, 0, 1, -1, 2, -3]) for _ in range(n)]
         for _ in range(m)]
    dense = smith_normal_form(a)
    elim = sparse_elimination(m, n, to_columns(a), record_col_ops=True)
    expect = [x for x in dense.invariant_factors() if x != 1]
    assert invariant_factor_chain([p.value for p in elim.pivots]) == expect
    assert len(elim.pivots) == len(dense.invariant_factors())
    materialize_from_pivots(elim, a)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 10 ** 6),
       st.integers(0, 3))
def test_sparse_solver(m, n, seed, pivot_seed):
    rnd = random.Random(seed)
    a = [[rnd.choice([0, 0, 1, -1, 2]) for _ in range(n)] for _ in range(m)]
    elim = sparse_elimination(m, n, to_columns(a), record_col_ops=True,
                              pivot_seed=pivot_seed)
    # pick a known-solvable rhs
    x0 = [rnd.randint(-3, 3) for _ in range(n)]
    z = {}
    for i in range(m):
        s = sum(a[i][j] * x0[j] for j in range(n))
        if s:
            z[i] = s
    x = elim.solve(z)
    assert x is not None
    for i in range(m):
        got = sum(a[i][j] * x.get(j, 0) for j in range(n))
        assert got == z.get(i, 0)


def test_solver_unsolvable():
    a = [[2, 0], [0, 2]]
    elim = sparse_elimination(2, 2, to_columns(a), record_col_ops=True)
    assert elim.solve({0: 1}) is None
    assert elim.solve({0: 2, 1: -4}) is not None


def test_row_ops_inverse():
    rnd = random.Random(7)
    a = [[rnd.choice([0, 1, -1, 3]) for _ in range(5)] for _ in range(5)]
    elim = sparse_elimination(5, 5, to_columns(a))
    v = {0: 3, 2: -1, 4: 5}
    assert elim.apply_row_ops_inverse(elim.apply_row_ops(v)) == v
    assert elim.apply_row_ops(elim.apply_row_ops_inverse(v)) == v


def test_invariant_factor_chain():
    assert invariant_factor_chain([2, 3]) == [6]
    assert invariant_factor_chain([2, 4]) == [2, 4]
    assert invariant_factor_chain([1, 1, 5]) == [5]
    assert invariant_factor_chain([6, 4]) == [2, 12]
    assert invariant_factor_chain([]) == []
