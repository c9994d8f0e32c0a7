"""
Exact Rational Linear Algebra

Thin layer over sympy's ``DomainMatrix`` over ``QQ``. Every engine that needs a
rank, a kernel or a particular solution goes through here, so values enter and
leave as ``fractions.Fraction`` and no engine touches sympy domain elements.
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import structlog
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

logger = structlog.get_logger(__name__)

Vector = Tuple[Fraction, ...]
Rows = Sequence[Sequence[Fraction]]


def to_qq(x) -> object:
    """Convert an int/Fraction into a QQ domain element"""
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def from_sympy(x) -> Fraction:
    """Convert a sympy Rational (or Integer) into a Fraction"""
    return Fraction(int(x.p), int(x.q))


def domain_matrix(rows: Rows, ncols: int) -> DomainMatrix:
    """Build a QQ DomainMatrix from a list of Fraction rows"""
    data = [[to_qq(v) for v in row] for row in rows]
    for row in data:
        if len(row) != ncols:
            raise ValueError(f"row of length {len(row)} in a matrix with {ncols} columns")
    return DomainMatrix(data, (len(data), ncols), QQ)


def _rows_of(dm: DomainMatrix) -> List[Vector]:
    m = dm.to_Matrix()
    return [tuple(from_sympy(m[i, j]) for j in range(m.cols)) for i in range(m.rows)]


def rank(rows: Rows, ncols: int) -> int:
    """Rank over QQ"""
    if not rows or ncols == 0:
        return 0
    return int(domain_matrix(rows, ncols).rank())


def rref(rows: Rows, ncols: int) -> Tuple[List[Vector], Tuple[int, ...]]:
    """Reduced row echelon form; returns the nonzero rows and the pivot columns"""
    if not rows or ncols == 0:
        return [], ()
    reduced, pivots = domain_matrix(rows, ncols).rref()
    out = _rows_of(reduced)[: len(pivots)]
    return out, tuple(pivots)


def nullspace(rows: Rows, ncols: int) -> List[Vector]:
    """Basis of {x : rows · x = 0} as a list of vectors of length ncols"""
    if ncols == 0:
        return []
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    basis = domain_matrix(rows, ncols).nullspace()
    return _rows_of(basis)


def solve(rows: Rows, rhs: Sequence[Fraction], ncols: int) -> Optional[Vector]:
    """
    One rational solution of rows · x = rhs, or None when the system is inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    if len(rows) != len(rhs):
        raise ValueError("right-hand side length does not match the number of equations")
    if not rows:
        return tuple(Fraction(0) for _ in range(ncols))
    augmented = [list(row) + [Fraction(b)] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, col in zip(reduced, pivots):
        x[col] = row[ncols]
    return tuple(x)


def transpose(rows: Rows, ncols: int) -> List[Vector]:
    return [tuple(row[j] for row in rows) for j in range(ncols)]


def mat_mul(a: Rows, b: Rows) -> List[Vector]:
    """Product of two rational matrices given as row lists"""
    if not a:
        return []
    inner = len(b)
    ncols = len(b[0]) if b else 0
    return [
        tuple(sum((a[i][k] * b[k][j] for k in range(inner)), Fraction(0)) for j in range(ncols))
        for i in range(len(a))
    ]


def mat_vec(a: Rows, v: Sequence[Fraction]) -> Vector:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def identity(n: int) -> List[Vector]:
    return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]


def inverse(rows: Rows) -> List[Vector]:
    """Inverse of a square rational matrix; raises ValueError when singular"""
    n = len(rows)
    augmented = [list(row) + list(e) for row, e in zip(rows, identity(n))]
    reduced, pivots = rref(augmented, 2 * n)
    if pivots != tuple(range(n)):
        raise ValueError("matrix is singular")
    return [tuple(row[n:]) for row in reduced]
