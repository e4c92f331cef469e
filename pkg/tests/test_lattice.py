import random

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from cyclotrace._lattice import diagonalize, mat_mul, rank_and_unimodular


def _sparse(rng, m, n, density=0.4, bound=6):
    return [{j: v for j in range(n) if rng.random() < density and (v := rng.randint(-bound, bound))} for _ in range(m)]


def _dense(rows, n):
    return Matrix([[r.get(j, 0) for j in range(n)] for r in rows]) if rows else Matrix.zeros(0, n)


def test_diagonal_matches_smith_form():
    rng = random.Random(2024)
    for _ in range(300):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        rows = _sparse(rng, m, n)
        A = _dense(rows, n)
        snf = smith_normal_form(A, domain=ZZ)
        inv = [abs(snf[i, i]) for i in range(min(m, n)) if snf[i, i] != 0]
        d = [abs(x) for x in diagonalize(rows, n)]
        assert len(d) == len(inv) == A.rank()
        prod_d, prod_inv = 1, 1
        for x in d:
            prod_d *= x
        for x in inv:
            prod_inv *= x
        assert prod_d == prod_inv
        assert rank_and_unimodular(rows, n) == (len(inv), all(x == 1 for x in inv))


def test_input_is_not_mutated():
    rows = [{0: 2, 1: 4}, {1: 3}]
    copy = [dict(r) for r in rows]
    diagonalize(rows, 2)
    assert rows == copy


def test_empty_and_zero():
    assert diagonalize([], 3) == []
    assert diagonalize([{}, {}], 3) == []


def test_sparse_product():
    rng = random.Random(5)
    for _ in range(50):
        a = _sparse(rng, 3, 4)
        b = _sparse(rng, 4, 2)
        assert _dense(mat_mul(a, b), 2) == _dense(a, 4) * _dense(b, 2)
