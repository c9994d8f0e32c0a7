"""
Z-Lattices

Finitely generated subgroups of ℚ^m kept in a canonical Hermite form: rows in
echelon shape, positive pivots, entries above each pivot reduced into
[0, pivot). Rational generators are handled by clearing denominators with the
lcm of all denominators, reducing over ℤ and dividing back, so two values are
equal exactly when their canonical matrices are equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import structlog

from iwasawa_lab.services import linalg
from iwasawa_lab.services.errors import DimensionMismatchError, NotSublatticeError, RankError

logger = structlog.get_logger(__name__)

Vector = Tuple[Fraction, ...]
IntMatrix = List[List[int]]

# Index of a sublattice of smaller rank
INFINITE = math.inf
IndexValue = Union[int, float]


# ------------------------------------------------------------ integer core


def _lcm_of_denominators(rows: Iterable[Sequence[Fraction]]) -> int:
    return reduce(lambda acc, x: acc * x.denominator // math.gcd(acc, x.denominator), (x for row in rows for x in row), 1)


def _to_integer_rows(rows: Sequence[Sequence[Fraction]]) -> Tuple[IntMatrix, int]:
    scale = _lcm_of_denominators(rows)
    return [[int(x * scale) for x in row] for row in rows], scale


def hermite_rows(rows: IntMatrix, ncols: int) -> IntMatrix:
    """Row-style Hermite normal form of an integer matrix with zero rows dropped"""
    a = [list(r) for r in rows if any(r)]
    n = len(a)
    r = 0
    for col in range(ncols):
        if r == n:
            break
        found = False
        while True:
            nonzero = [i for i in range(r, n) if a[i][col] != 0]
            if not nonzero:
                break
            found = True
            p = min(nonzero, key=lambda i: abs(a[i][col]))
            a[r], a[p] = a[p], a[r]
            clean = True
            for i in range(r + 1, n):
                q = a[i][col] // a[r][col]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                if a[i][col] != 0:
                    clean = False
            if clean:
                break
        if not found:
            continue
        if a[r][col] < 0:
            a[r] = [-x for x in a[r]]
        pivot = a[r][col]
        for i in range(r):
            q = a[i][col] // pivot
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    return a[:r]


def smith_normal_form(m: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Smith normal form with transforms.

    Returns (U, D, V) with U, V unimodular and D = U·M·V diagonal,
    dᵢ ≥ 0 and dᵢ | dᵢ₊₁.
    """
    n = len(m)
    ncols = len(m[0]) if n else 0
    d = [[int(x) for x in row] for row in m]
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i: int, j: int):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int):
        for mat in (d, v):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def add_row(target: int, source: int, k: int):
        d[target] = [x + k * y for x, y in zip(d[target], d[source])]
        u[target] = [x + k * y for x, y in zip(u[target], u[source])]

    def add_col(target: int, source: int, k: int):
        for mat in (d, v):
            for row in mat:
                row[target] += k * row[source]

    for t in range(min(n, ncols)):
        entries = [(abs(d[i][j]), i, j) for i in range(t, n) for j in range(t, ncols) if d[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            line = [(abs(d[i][t]), i, t) for i in range(t + 1, n) if d[i][t]]
            line += [(abs(d[t][j]), t, j) for j in range(t + 1, ncols) if d[t][j]]
            if line:
                smallest = min(line)
                if smallest[0] < abs(d[t][t]):
                    _, i1, j1 = smallest
                    if j1 == t:
                        swap_rows(t, i1)
                    else:
                        swap_cols(t, j1)
                for i in range(t + 1, n):
                    q = d[i][t] // d[t][t]
                    if q:
                        add_row(i, t, -q)
                for j in range(t + 1, ncols):
                    q = d[t][j] // d[t][t]
                    if q:
                        add_col(j, t, -q)
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, ncols) if d[i][j] % d[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return u, d, v


def integer_left_kernel(rows: Sequence[Sequence[Fraction]]) -> IntMatrix:
    """ℤ-basis of {x ∈ ℤ^n : x·C = 0} for a rational n×k matrix C"""
    if not rows:
        return []
    ints, _ = _to_integer_rows(rows)
    u, d, _ = smith_normal_form(ints)
    r = sum(1 for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i] != 0)
    return [row for row in u[r:]]


def _pivot(row: Sequence[Fraction]) -> int:
    return next(j for j, x in enumerate(row) if x != 0)


# --------------------------------------------------------------- lattices


@dataclass(frozen=True)
class ZLattice:
    """A finitely generated subgroup of ℚ^m stored in canonical form"""

    ambient_dim: int
    basis: Tuple[Vector, ...] = ()

    def __post_init__(self):
        if self.ambient_dim < 0:
            raise DimensionMismatchError(f"negative ambient dimension {self.ambient_dim}")
        rows = [tuple(Fraction(x) for x in row) for row in self.basis]
        for row in rows:
            if len(row) != self.ambient_dim:
                raise DimensionMismatchError(f"generator of length {len(row)} in ambient dimension {self.ambient_dim}")
        ints, scale = _to_integer_rows(rows)
        canonical = tuple(tuple(Fraction(x, scale) for x in row) for row in hermite_rows(ints, self.ambient_dim))
        object.__setattr__(self, "basis", canonical)

    @classmethod
    def standard(cls, m: int) -> "ZLattice":
        """ℤ^m"""
        return cls(m, linalg.identity(m))

    @classmethod
    def zero(cls, m: int) -> "ZLattice":
        return cls(m, ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_full(self) -> bool:
        return self.rank == self.ambient_dim

    def pivots(self) -> Tuple[int, ...]:
        return tuple(_pivot(row) for row in self.basis)

    def coordinates(self, v: Sequence[Fraction]) -> Optional[Vector]:
        """Rational coordinates of v in the basis, or None when v is outside the ℚ-span"""
        v = tuple(Fraction(x) for x in v)
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        coords: List[Fraction] = []
        for i, (row, p) in enumerate(zip(self.basis, self.pivots())):
            acc = v[p] - sum((coords[j] * self.basis[j][p] for j in range(i)), Fraction(0))
            coords.append(acc / row[p])
        residual = tuple(x - sum((c * row[k] for c, row in zip(coords, self.basis)), Fraction(0)) for k, x in enumerate(v))
        if any(residual):
            return None
        return tuple(coords)

    def contains(self, v: Sequence[Fraction]) -> bool:
        return member(v, self)

    def contains_lattice(self, other: "ZLattice") -> bool:
        _same_dim(self, other)
        return all(member(row, self) for row in other.basis)

    def integer_coordinates(self, other: "ZLattice") -> IntMatrix:
        """Coordinates of other's basis in this basis; other must be a sublattice"""
        out = []
        for row in other.basis:
            coords = self.coordinates(row)
            if coords is None or any(c.denominator != 1 for c in coords):
                raise NotSublatticeError(f"{_fmt(row)} is not in the lattice")
            out.append([int(c) for c in coords])
        return out

    def image(self, matrix: Sequence[Sequence[Fraction]]) -> "ZLattice":
        """The lattice M·L for a square rational matrix M acting on columns"""
        return ZLattice(self.ambient_dim, [linalg.mat_vec(matrix, row) for row in self.basis])

    def to_dict(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "basis": [[_fmt_q(x) for x in row] for row in self.basis]}

    def __str__(self) -> str:
        return f"ZLattice(m={self.ambient_dim}, basis={[_fmt(row) for row in self.basis]})"


def _fmt_q(x: Fraction) -> str:
    return str(x)


def _fmt(row: Sequence[Fraction]) -> str:
    return "(" + ", ".join(str(x) for x in row) + ")"


def _same_dim(a: ZLattice, b: ZLattice):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(f"ambient dimensions {a.ambient_dim} and {b.ambient_dim} differ")


@dataclass(frozen=True)
class QSubspace:
    """A rational subspace of ℚ^m, stored by its reduced row echelon basis"""

    ambient_dim: int
    basis: Tuple[Vector, ...] = ()

    def __post_init__(self):
        rows = [tuple(Fraction(x) for x in row) for row in self.basis]
        for row in rows:
            if len(row) != self.ambient_dim:
                raise DimensionMismatchError(f"vector of length {len(row)} in ambient dimension {self.ambient_dim}")
        reduced, _ = linalg.rref(rows, self.ambient_dim)
        object.__setattr__(self, "basis", tuple(reduced))

    @classmethod
    def span_of(cls, lattice: ZLattice) -> "QSubspace":
        return cls(lattice.ambient_dim, lattice.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[Fraction]) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        return linalg.rank(list(self.basis) + [tuple(Fraction(x) for x in v)], self.ambient_dim) == self.dim


# -------------------------------------------------------------- operations


def lattice_from_generators(m: int, gens: Sequence[Sequence[Fraction]]) -> ZLattice:
    """Canonical form of the ℤ-span of the generators"""
    lattice = ZLattice(m, [tuple(Fraction(x) for x in g) for g in gens])
    logger.debug("lattice built", ambient_dim=m, generators=len(gens), rank=lattice.rank)
    return lattice


def member(v: Sequence[Fraction], lattice: ZLattice) -> bool:
    """True iff v is a ℤ-combination of the basis rows"""
    coords = lattice.coordinates(v)
    return coords is not None and all(c.denominator == 1 for c in coords)


def intersect(a: ZLattice, b: ZLattice) -> ZLattice:
    """a ∩ b via the integer left kernel of the stacked matrix [A; −B]"""
    _same_dim(a, b)
    if a.rank == 0 or b.rank == 0:
        return ZLattice.zero(a.ambient_dim)
    stacked = [list(row) for row in a.basis] + [[-x for x in row] for row in b.basis]
    kernel = integer_left_kernel(stacked)
    gens = [
        tuple(sum((c * row[k] for c, row in zip(coeffs[: a.rank], a.basis)), Fraction(0)) for k in range(a.ambient_dim))
        for coeffs in kernel
    ]
    return ZLattice(a.ambient_dim, gens)


def lattice_sum(a: ZLattice, b: ZLattice) -> ZLattice:
    """a + b"""
    _same_dim(a, b)
    return ZLattice(a.ambient_dim, a.basis + b.basis)


def direct_sum(a: ZLattice, b: ZLattice) -> ZLattice:
    """a ⊕ b inside ℚ^{m₁ + m₂}"""
    pad_a = tuple(Fraction(0) for _ in range(b.ambient_dim))
    pad_b = tuple(Fraction(0) for _ in range(a.ambient_dim))
    rows = [row + pad_a for row in a.basis] + [pad_b + row for row in b.basis]
    return ZLattice(a.ambient_dim + b.ambient_dim, rows)


def scale(lattice: ZLattice, factor: Fraction) -> ZLattice:
    factor = Fraction(factor)
    if factor == 0:
        return ZLattice.zero(lattice.ambient_dim)
    return ZLattice(lattice.ambient_dim, [tuple(factor * x for x in row) for row in lattice.basis])


def saturate(lattice: ZLattice, ambient: Optional[ZLattice] = None) -> ZLattice:
    """
    (ℚ-span of the lattice) ∩ ambient, with ambient = ℤ^m by default.

    For a lattice inside the ambient lattice this is the largest lattice of the
    same rank containing it with finite index.
    """
    m = lattice.ambient_dim
    ambient = ambient if ambient is not None else ZLattice.standard(m)
    _same_dim(lattice, ambient)
    if lattice.rank == 0:
        return ZLattice.zero(m)
    normals = linalg.nullspace(list(lattice.basis), m)
    if not normals:
        return ambient
    pairing = [tuple(sum((a * n for a, n in zip(row, normal)), Fraction(0)) for normal in normals) for row in ambient.basis]
    kernel = integer_left_kernel(pairing)
    gens = [
        tuple(sum((c * row[k] for c, row in zip(coeffs, ambient.basis)), Fraction(0)) for k in range(m)) for coeffs in kernel
    ]
    return ZLattice(m, gens)


def index_in(sub: ZLattice, lattice: ZLattice) -> IndexValue:
    """[lattice : sub], or INFINITE when sub has smaller rank"""
    _same_dim(sub, lattice)
    coords = lattice.integer_coordinates(sub)
    if sub.rank < lattice.rank:
        return INFINITE
    _, d, _ = smith_normal_form(coords)
    index = 1
    for i in range(len(d)):
        index *= d[i][i]
    return index


def covolume_ratio(m: ZLattice, r: ZLattice) -> Fraction:
    """
    covol(M) / covol(R) for two lattices with the same ℚ-span, computed as
    [R : M∩R] / [M : M∩R].
    """
    _same_dim(m, r)
    if m.rank != r.rank or QSubspace.span_of(m) != QSubspace.span_of(r):
        raise RankError("covolume ratio needs lattices spanning the same rational subspace")
    common = intersect(m, r)
    return Fraction(int(index_in(common, r)), int(index_in(common, m)))


def stable_under(obj: Union[ZLattice, QSubspace], matrix: Sequence[Sequence[Fraction]]) -> bool:
    """True iff M·W ⊆ W (subspace) or M·L ⊆ L (lattice), with M acting on columns"""
    n = obj.ambient_dim
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise DimensionMismatchError(f"matrix is not {n}×{n}")
    images = [linalg.mat_vec(matrix, row) for row in obj.basis]
    if isinstance(obj, ZLattice):
        return all(member(w, obj) for w in images)
    return all(obj.contains(w) for w in images)
