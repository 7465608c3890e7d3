import random
from fractions import Fraction as F

import pytest

from polysing.errors import DegenerateInput, ShapeError
from polysing.ratlin import (
    Inconsistent,
    Underdetermined,
    Unique,
    determinant,
    ext_gcd_multi,
    invert_unimodular,
    matrix_rank,
    saturated_basis,
    smith_normal_form,
    solve_exact,
)


def mat_mult(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def test_ext_gcd_multi_examples():
    assert ext_gcd_multi([12, 18]) == (6, [-1, 1])
    g, c = ext_gcd_multi([2, 3, 5])
    assert g == 1 and 2 * c[0] + 3 * c[1] + 5 * c[2] == 1
    assert ext_gcd_multi([7]) == (7, [1])


def test_ext_gcd_multi_identity_random():
    rng = random.Random(7)
    for _ in range(300):
        vals = [rng.randint(-40, 40) for _ in range(rng.randint(1, 6))]
        if not any(vals):
            continue
        g, c = ext_gcd_multi(vals)
        assert g >= 1
        assert sum(ci * vi for ci, vi in zip(c, vals)) == g
        assert all(vi % g == 0 for vi in vals)


def test_ext_gcd_multi_deterministic():
    vals = [30, -42, 70, 105]
    assert ext_gcd_multi(vals) == ext_gcd_multi(list(vals))


def test_ext_gcd_multi_rejects_all_zero():
    with pytest.raises(DegenerateInput):
        ext_gcd_multi([0, 0])
    with pytest.raises(DegenerateInput):
        ext_gcd_multi([])


def test_smith_examples():
    assert smith_normal_form([[2, 0], [0, 3]]).diagonal == (1, 6)
    assert smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).diagonal == (1, 1, 1)
    assert smith_normal_form([[0, 0], [0, 0]]).diagonal == (0, 0)


def test_smith_recomposition_random():
    rng = random.Random(11)
    for _ in range(60):
        m = rng.randint(1, 5)
        n = rng.randint(1, 5)
        a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        sf = smith_normal_form(a)
        d = mat_mult(mat_mult([list(r) for r in sf.left], a), [list(r) for r in sf.right])
        for i in range(m):
            for j in range(n):
                want = sf.diagonal[i] if i == j and i < len(sf.diagonal) else 0
                assert d[i][j] == want
        for k in range(len(sf.diagonal) - 1):
            if sf.diagonal[k]:
                assert sf.diagonal[k + 1] % sf.diagonal[k] == 0
            else:
                assert sf.diagonal[k + 1] == 0
        assert abs(determinant(sf.left)) == 1
        assert abs(determinant(sf.right)) == 1


def test_determinant_examples():
    assert determinant([[1, 1, 0], [3, 0, -1], [0, 2, 1]]) == -1
    assert determinant([[1, 0], [0, 1]]) == 1
    assert determinant([[1, 0], [2, 3]]) == 3


def test_determinant_rejects_nonsquare():
    with pytest.raises(ShapeError):
        determinant([[1, 2, 3], [4, 5, 6]])


def test_determinant_multiplicative_random():
    rng = random.Random(13)
    for _ in range(40):
        n = rng.randint(1, 4)
        a = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        b = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        assert determinant(mat_mult(a, b)) == determinant(a) * determinant(b)


def test_solve_examples():
    assert solve_exact([[2, 1], [0, 3]], [1, 3]) == Unique((F(0), F(1)))
    res = solve_exact([[1, 1], [2, 2]], [0, 1])
    assert isinstance(res, Inconsistent)
    res2 = solve_exact([[1, 1], [2, 2]], [0, 0])
    assert isinstance(res2, Underdetermined)
    assert len(res2.nullspace) == 1


def test_solve_certificates_random():
    rng = random.Random(17)
    for _ in range(120):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        a = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]
        b = [rng.randint(-4, 4) for _ in range(m)]
        res = solve_exact(a, b)
        if isinstance(res, Unique):
            for row, rhs in zip(a, b):
                assert sum(x * v for x, v in zip(row, res.x)) == rhs
        elif isinstance(res, Inconsistent):
            y = res.certificate
            for j in range(n):
                assert sum(y[i] * a[i][j] for i in range(m)) == 0
            assert sum(y[i] * b[i] for i in range(m)) != 0
        else:
            for row, rhs in zip(a, b):
                assert sum(x * v for x, v in zip(row, res.particular)) == rhs
            for vec in res.nullspace:
                for row in a:
                    assert sum(x * v for x, v in zip(row, vec)) == 0


def test_saturated_basis_and_inverse():
    basis = saturated_basis([[2, 0], [0, 2]], 2)
    assert sorted(basis) == [(0, 1), (1, 0)]
    (b,) = saturated_basis([[6, -1]], 2)
    assert b in ((6, -1), (-6, 1))
    v = [[2, 1], [1, 1]]
    vi = invert_unimodular(v)
    assert mat_mult(v, vi) == [[1, 0], [0, 1]]


def test_matrix_rank():
    assert matrix_rank([[1, 2], [2, 4]]) == 1
    assert matrix_rank([[1, 0], [0, 1]]) == 2
    assert matrix_rank([[F(1, 2), F(1, 3)]]) == 1
