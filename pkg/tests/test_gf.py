import random

import pytest

from regencode.gf import (
    GF2,
    GF16,
    GF256,
    FieldMatrix,
    FieldSpec,
    InconsistentSystemError,
    SingularMatrixError,
    is_irreducible,
    mat_inv,
    mat_rank,
    mat_solve,
)


def brute_force_inverse_table(field):
    table = {}
    for a in range(1, field.order):
        for b in range(1, field.order):
            if field.mul(a, b) == 1:
                table[a] = b
                break
    return table


def test_gf2_characteristic():
    assert GF2.add(1, 1) == 0
    assert GF2.mul(1, 1) == 1


def test_gf256_inverse_against_brute_force():
    table = brute_force_inverse_table(GF256)
    assert len(table) == 255
    for a, b in table.items():
        assert GF256.inv(a) == b
    # frozen from the brute-force table: inv(2) differs per modulus
    assert table[2] == 142
    aes_field = FieldSpec(8, 0x11B)
    assert brute_force_inverse_table(aes_field)[2] == 141


def test_multiplicative_group_order():
    rnd = random.Random(7)
    for field in (GF2, GF16, GF256):
        for _ in range(20):
            a = rnd.randrange(1, field.order)
            assert field.pow(a, field.order - 1) == 1
    assert GF256.pow(0, 0) == 1


def test_inv_zero_raises():
    with pytest.raises(ZeroDivisionError):
        GF256.inv(0)


@pytest.mark.parametrize("field", [GF2, GF16, GF256])
def test_field_axioms_random(field):
    rnd = random.Random(field.m)
    for _ in range(200):
        a, b, c = (rnd.randrange(field.order) for _ in range(3))
        assert field.mul(a, field.mul(b, c)) == field.mul(field.mul(a, b), c)
        assert field.mul(a, field.add(b, c)) == field.add(
            field.mul(a, b), field.mul(a, c)
        )
        assert field.add(a, b) == field.add(b, a)
        assert field.mul(a, b) == field.mul(b, a)
        if a:
            assert field.mul(a, field.inv(a)) == 1


def test_irreducibility_check():
    assert is_irreducible(0b111)  # x^2 + x + 1
    assert not is_irreducible(0b101)  # x^2 + 1 = (x+1)^2
    assert is_irreducible(0x11D)
    assert not is_irreducible(0x11C)  # divisible by x
    with pytest.raises(ValueError):
        FieldSpec(2, 0b101)
    with pytest.raises(ValueError):
        FieldSpec(8, 0b111)  # degree mismatch
    with pytest.raises(ValueError):
        FieldSpec(0, 0b11)


def test_mat_solve_identity():
    A = FieldMatrix.identity(GF256, 4)
    b = FieldMatrix.column(GF256, [9, 8, 7, 6])
    assert mat_solve(A, b).col_vector() == [9, 8, 7, 6]


def test_mat_solve_vandermonde_multiply_back():
    rnd = random.Random(3)
    for _ in range(20):
        x0, x1 = rnd.sample(range(256), 2)
        A = FieldMatrix(GF256, [[1, x0], [1, x1]])
        b = FieldMatrix.column(GF256, [rnd.randrange(256), rnd.randrange(256)])
        x = mat_solve(A, b)
        assert A.mul(x).col_vector() == b.col_vector()


def test_mat_solve_singular():
    A = FieldMatrix(GF256, [[1, 0], [1, 0]])  # all-zero column
    b = FieldMatrix.column(GF256, [1, 1])
    with pytest.raises(SingularMatrixError):
        mat_solve(A, b)


def test_mat_solve_overdetermined_inconsistent():
    A = FieldMatrix(GF2, [[1, 0], [0, 1], [1, 1]])
    good = mat_solve(A, FieldMatrix.column(GF2, [1, 0, 1]))
    assert good.col_vector() == [1, 0]
    with pytest.raises(InconsistentSystemError):
        mat_solve(A, FieldMatrix.column(GF2, [1, 0, 0]))


def test_mat_rank():
    assert mat_rank(FieldMatrix.zeros(GF256, 3, 4)) == 0
    A = FieldMatrix(GF256, [[1, 2], [3, 4], [1, 2]])  # duplicated row
    assert mat_rank(A) == mat_rank(FieldMatrix(GF256, [[1, 2], [3, 4]]))
    assert mat_rank(FieldMatrix.identity(GF16, 5)) == 5


def test_mat_inv_round_trip():
    rnd = random.Random(11)
    for _ in range(10):
        pts = rnd.sample(range(256), 3)
        A = FieldMatrix(GF256, [[GF256.pow(x, j) for j in range(3)] for x in pts])
        assert A.mul(mat_inv(A)) == FieldMatrix.identity(GF256, 3)
