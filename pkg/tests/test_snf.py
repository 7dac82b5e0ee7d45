from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from confcube.snf import SparseMatrix, rank, smith_normal_form
from oracles import bareiss_rank


def fraction_rank(rows: list[list[int]]) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    r = 0
    for c in range(len(a[0]) if a else 0):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                q = a[i][c] / a[r][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def random_matrix(rng: random.Random) -> list[list[int]]:
    m, n = rng.randint(1, 8), rng.randint(1, 8)
    return [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]


def test_examples():
    assert smith_normal_form([[0, 0], [0, 0]]).factors == ()
    assert rank([[0, 0], [0, 0]]) == 0
    s = smith_normal_form([[2, 0], [0, 3]])
    assert s.factors == (1, 6) and s.rank == 2 and s.torsion == (6,)
    assert smith_normal_form([[2, 4], [6, 8]]).factors == (2, 4)


def test_oracles_agree_with_each_other():
    rng = random.Random(3)
    for _ in range(50):
        a = random_matrix(rng)
        assert bareiss_rank(a) == fraction_rank(a)


def test_random_matrices_against_oracles():
    rng = random.Random(2024)
    for _ in range(200):
        a = random_matrix(rng)
        s = smith_normal_form(a)
        assert s.rank == bareiss_rank(a)
        assert all(d > 0 for d in s.factors)
        assert all(b % a_ == 0 for a_, b in zip(s.factors, s.factors[1:]))


@pytest.mark.parametrize("seed", range(5))
def test_factors_match_sympy(seed):
    rng = random.Random(seed)
    for _ in range(20):
        a = random_matrix(rng)
        want = sympy_snf(sympy.Matrix(a), domain=sympy.ZZ)
        diag = [abs(int(want[i, i])) for i in range(min(want.shape)) if want[i, i] != 0]
        assert list(smith_normal_form(a).factors) == diag


def test_sparse_matrix_helpers():
    m = SparseMatrix.from_dense([[1, 0, 2], [0, 0, 3]])
    assert m.to_dense() == [[1, 0, 2], [0, 0, 3]]
    assert m.nnz() == 3
    m.add(0, 0, -1)
    assert m.get(0, 0) == 0 and m.nnz() == 2
    ident = SparseMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert m.matmul(ident).to_dense() == m.to_dense()


def test_input_not_mutated():
    m = SparseMatrix.from_dense([[2, 4], [6, 8]])
    smith_normal_form(m)
    assert m.to_dense() == [[2, 4], [6, 8]]


def test_large_entries_stay_exact():
    big = 10 ** 30
    s = smith_normal_form([[big, 0], [0, big * 3]])
    assert s.factors == (big, 3 * big)
