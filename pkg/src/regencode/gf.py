"""Binary extension field arithmetic GF(2^m) and dense linear algebra over it.

Field elements are ints in [0, 2^m); addition is XOR, multiplication is
carryless multiplication reduced by an irreducible modulus polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass


class SingularMatrixError(ArithmeticError):
    """Coefficient matrix does not have full column rank."""


class InconsistentSystemError(SingularMatrixError):
    """Right-hand side lies outside the column space."""


def _poly_deg(p: int) -> int:
    return p.bit_length() - 1


def _poly_mod(a: int, b: int) -> int:
    db = _poly_deg(b)
    while a.bit_length() - 1 >= db and a:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = _poly_deg(poly)
    if deg < 1:
        return False
    for q in range(2, 1 << (deg // 2 + 1)):
        if _poly_mod(poly, q) == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^m) described by its extension degree and modulus bitmask."""

    m: int
    modulus: int

    def __post_init__(self):
        if not 1 <= self.m <= 16:
            raise ValueError(f"extension degree {self.m} outside [1, 16]")
        if _poly_deg(self.modulus) != self.m:
            raise ValueError(
                f"modulus {self.modulus:#x} does not have degree {self.m}"
            )
        if not is_irreducible(self.modulus):
            raise ValueError(f"modulus {self.modulus:#x} is reducible")

    @property
    def order(self) -> int:
        return 1 << self.m

    def check(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise ValueError(f"{a} is not a GF(2^{self.m}) element")
        return a

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add

    def mul(self, a: int, b: int) -> int:
        order, modulus = self.order, self.modulus
        result = 0
        while b:
            if b & 1:
                result ^= a
            b >>= 1
            a <<= 1
            if a & order:
                a ^= modulus
        return result

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))


GF2 = FieldSpec(1, 0b11)
GF16 = FieldSpec(4, 0x13)
GF256 = FieldSpec(8, 0x11D)  # standard Reed-Solomon modulus


class FieldMatrix:
    """Dense matrix over a FieldSpec, stored as row lists of ints."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: FieldSpec, data: list[list[int]]):
        self.field = field
        self.data = [list(row) for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        for row in self.data:
            if len(row) != self.cols:
                raise ValueError("ragged rows")

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "FieldMatrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "FieldMatrix":
        return cls(field, [[0] * cols for _ in range(rows)])

    @classmethod
    def column(cls, field: FieldSpec, vec: list[int]) -> "FieldMatrix":
        return cls(field, [[v] for v in vec])

    def col_vector(self) -> list[int]:
        if self.cols != 1:
            raise ValueError("not a column vector")
        return [row[0] for row in self.data]

    def mul(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        f = self.field
        out = [[0] * other.cols for _ in range(self.rows)]
        for i, arow in enumerate(self.data):
            orow = out[i]
            for t, a in enumerate(arow):
                if a == 0:
                    continue
                brow = other.data[t]
                if a == 1:
                    for j, b in enumerate(brow):
                        if b:
                            orow[j] ^= b
                else:
                    for j, b in enumerate(brow):
                        if b:
                            orow[j] ^= f.mul(a, b)
        return FieldMatrix(f, out)

    def mul_vec(self, vec: list[int]) -> list[int]:
        if self.cols != len(vec):
            raise ValueError("dimension mismatch")
        f = self.field
        out = []
        for row in self.data:
            acc = 0
            for a, v in zip(row, vec):
                if a and v:
                    acc ^= v if a == 1 else f.mul(a, v)
            out.append(acc)
        return out

    def vstack(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.cols != other.cols or self.field != other.field:
            raise ValueError("incompatible stack")
        return FieldMatrix(self.field, self.data + other.data)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldMatrix)
            and self.field == other.field
            and self.data == other.data
        )

    def __repr__(self) -> str:
        return f"FieldMatrix({self.rows}x{self.cols} over GF(2^{self.field.m}))"


def _eliminate(field: FieldSpec, work: list[list[int]], cols: int):
    """In-place forward elimination on the leading `cols` columns.

    Returns the list of pivot row indices, one per pivoted column.
    """
    pivots = []
    prow = 0
    nrows = len(work)
    for col in range(cols):
        piv = None
        for r in range(prow, nrows):
            if work[r][col]:
                piv = r
                break
        if piv is None:
            pivots.append(None)
            continue
        work[prow], work[piv] = work[piv], work[prow]
        inv_p = field.inv(work[prow][col])
        if inv_p != 1:
            work[prow] = [field.mul(inv_p, v) for v in work[prow]]
        lead = work[prow]
        for r in range(nrows):
            if r == prow:
                continue
            factor = work[r][col]
            if factor == 0:
                continue
            row = work[r]
            if factor == 1:
                for j in range(col, len(lead)):
                    if lead[j]:
                        row[j] ^= lead[j]
            else:
                for j in range(col, len(lead)):
                    if lead[j]:
                        row[j] ^= field.mul(factor, lead[j])
        pivots.append(prow)
        prow += 1
    return pivots


def mat_solve(A: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    """Solve A x = b exactly by Gauss-Jordan elimination.

    A may have more rows than columns; raises SingularMatrixError when the
    column rank is deficient and InconsistentSystemError when no x exists.
    """
    if A.rows != b.rows:
        raise ValueError("A and b row counts differ")
    field = A.field
    work = [arow + brow for arow, brow in zip(A.data, b.data)]
    pivots = _eliminate(field, work, A.cols)
    if any(p is None for p in pivots):
        raise SingularMatrixError("coefficient matrix is rank deficient")
    rank = A.cols
    for r in range(rank, A.rows):
        if any(work[r][A.cols :]):
            raise InconsistentSystemError("no solution: inconsistent system")
    x = [work[p][A.cols :] for p in pivots]
    return FieldMatrix(field, x)


def mat_rank(A: FieldMatrix) -> int:
    work = [row[:] for row in A.data]
    pivots = _eliminate(A.field, work, A.cols)
    return sum(1 for p in pivots if p is not None)


def mat_inv(A: FieldMatrix) -> FieldMatrix:
    if A.rows != A.cols:
        raise ValueError("not square")
    return mat_solve(A, FieldMatrix.identity(A.field, A.rows))
