"""
Exact Matrices - Tuple matrices over Laurent polynomials or rationals
Rank, kernel and inverse go through sympy DomainMatrix over QQ (numeric q) or QQ(q) (symbolic q).
"""

from fractions import Fraction
from functools import reduce
from typing import List, Optional, Sequence, Tuple, Union

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from app.core.exceptions import InvalidModule
from app.services.laurent import Q_SYMBOL, LaurentPoly, QValue

Scalar = Union[LaurentPoly, Fraction, int]
Vector = Tuple[Scalar, ...]
Matrix = Tuple[Tuple[Scalar, ...], ...]

_SAMPLE_Q = QValue(Fraction(2))
_SYMBOLIC_FIELD = QQ.frac_field(Q_SYMBOL)


def coerce(value, q: Optional[QValue]) -> Scalar:
    """Laurent polynomial in symbolic mode, rational at q in numeric mode"""
    if q is None:
        return LaurentPoly.coerce(value)
    if isinstance(value, LaurentPoly):
        return value.evaluate(q)
    return Fraction(value)


def zero(q: Optional[QValue]) -> Scalar:
    return LaurentPoly.zero() if q is None else Fraction(0)


def one(q: Optional[QValue]) -> Scalar:
    return LaurentPoly.one() if q is None else Fraction(1)


def identity(n: int, q: Optional[QValue]) -> Matrix:
    return tuple(tuple(one(q) if i == j else zero(q) for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int, q: Optional[QValue]) -> Matrix:
    return tuple(tuple(zero(q) for _ in range(cols)) for _ in range(rows))


def shape(a: Matrix) -> Tuple[int, int]:
    return len(a), len(a[0]) if a else 0


def _dot(row: Sequence[Scalar], col: Sequence[Scalar], start: Scalar) -> Scalar:
    total = start
    for x, y in zip(row, col):
        if x and y:
            total = total + x * y
    return total


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise InvalidModule(f"cannot multiply {shape(a)} by {shape(b)}")
    start = a[0][0] * 0 if a and a[0] else 0
    columns = list(zip(*b))
    return tuple(tuple(_dot(row, col, start) for col in columns) for row in a)


def matvec(a: Matrix, v: Vector) -> Vector:
    start = v[0] * 0 if v else 0
    return tuple(_dot(row, v, start) for row in a)


def matadd(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def matsub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(c: Scalar, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def matpow(a: Matrix, exponent: int, q: Optional[QValue]) -> Matrix:
    result = identity(len(a), q)
    for _ in range(exponent):
        result = matmul(result, a)
    return result


def is_zero_matrix(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def matrices_equal(a: Matrix, b: Matrix) -> bool:
    return shape(a) == shape(b) and is_zero_matrix(matsub(a, b))


def is_diagonal(a: Matrix) -> bool:
    return all(not a[i][j] for i in range(len(a)) for j in range(len(a)) if i != j)


def evaluate(a: Matrix, q: QValue) -> Matrix:
    return tuple(tuple(coerce(x, q) for x in row) for row in a)


# DomainMatrix bridge


def _domain(q: Optional[QValue]):
    return QQ if q is not None else _SYMBOLIC_FIELD


def _to_domain(value: Scalar, q: Optional[QValue]):
    if q is not None:
        f = Fraction(value)
        return QQ(f.numerator, f.denominator)
    return _SYMBOLIC_FIELD.from_sympy(LaurentPoly.coerce(value).to_sympy())


def _domain_matrix(rows: Sequence[Sequence[Scalar]], ncols: int, q: Optional[QValue]) -> DomainMatrix:
    K = _domain(q)
    return DomainMatrix([[_to_domain(x, q) for x in row] for row in rows], (len(rows), ncols), K)


def _from_sympy_rational(expr) -> Fraction:
    value = sympy.Rational(expr)
    return Fraction(int(value.p), int(value.q))


def rank(rows: Sequence[Sequence[Scalar]], q: Optional[QValue] = None) -> int:
    if not rows or not rows[0]:
        return 0
    full = min(len(rows), len(rows[0]))
    if q is None:
        # rank at a specialization never exceeds the generic rank
        sampled = rank([[LaurentPoly.coerce(x).evaluate(_SAMPLE_Q) for x in row] for row in rows], _SAMPLE_Q)
        if sampled == full:
            return full
    return _domain_matrix(rows, len(rows[0]), q).rank()


def _clear_denominators(entries: List[sympy.Expr]) -> Vector:
    denominators = [sympy.fraction(sympy.cancel(e))[1] for e in entries]
    common = reduce(sympy.lcm, denominators, sympy.Integer(1))
    return tuple(LaurentPoly.from_sympy(sympy.cancel(e * common)) for e in entries)


def nullspace(rows: Sequence[Sequence[Scalar]], ncols: int, q: Optional[QValue] = None) -> List[Vector]:
    """Basis of {v : rows . v = 0}; symbolic vectors are scaled to Laurent entries"""
    if ncols == 0:
        return []
    if not rows:
        return list(identity(ncols, q))
    basis = _domain_matrix(rows, ncols, q).nullspace().to_Matrix().tolist()
    if q is not None:
        return [tuple(_from_sympy_rational(x) for x in vector) for vector in basis]
    return [_clear_denominators(vector) for vector in basis]


def inverse(a: Matrix, q: Optional[QValue] = None) -> Matrix:
    n = len(a)
    try:
        inv = _domain_matrix(a, n, q).inv().to_Matrix().tolist()
    except DMNonInvertibleMatrixError as e:
        raise InvalidModule(f"matrix of size {n} is not invertible") from e
    if q is not None:
        return tuple(tuple(_from_sympy_rational(x) for x in row) for row in inv)
    return tuple(tuple(LaurentPoly.from_sympy(x) for x in row) for row in inv)


def column(a: Matrix, j: int) -> Vector:
    return tuple(row[j] for row in a)


def from_columns(columns: Sequence[Vector]) -> Matrix:
    return tuple(zip(*columns))
