"""
Complex Tori and Rational Hodge Data

A torus is ℝ^{2g}/ℤ^{2g} with a complex structure J over a real algebraic
field F (J² = −I). Tori coming from a lattice Δ ⊂ K^g, K = ℚ(√−d), are
converted with J = M/√d where M is multiplication by √−d in the lattice basis;
they remember Δ so that orders, subtori and isogenies can be computed on the
lattice side.

Endomorphism algebras, Picard numbers and the rational (2,0)+(0,2) part are
solution spaces of J-linear conditions with rational unknowns, reduced to
ℚ-linear algebra through ``scalarize``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product as cartesian
from typing import List, Optional, Sequence, Tuple

import structlog
from sympy import factorint

from iwasawa_lab.services import linalg
from iwasawa_lab.services.errors import (
    DimensionMismatchError,
    FieldMismatchError,
    NotComplexLineError,
    NotKLatticeError,
    RankError,
)
from iwasawa_lab.services.exact_fields import (
    QuadElem,
    QuadField,
    RealAlgElem,
    RealAlgField,
    scalarize,
    sign_of,
)
from iwasawa_lab.services.zlattice import (
    QSubspace,
    ZLattice,
    covolume_ratio,
    index_in,
    intersect,
    lattice_from_generators,
    lattice_sum,
    direct_sum,
    saturate,
    stable_under,
)

logger = structlog.get_logger(__name__)

Matrix = Tuple[Tuple[RealAlgElem, ...], ...]
RationalMatrix = Tuple[Tuple[Fraction, ...], ...]


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, inner, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = a[i][0] * b[0][j]
            for k in range(1, inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _lift_matrix(fld: RealAlgField, rows: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(tuple(fld.from_rational(x) for x in row) for row in rows)


def _relift(fld: RealAlgField, matrix: Matrix) -> Matrix:
    """Move a matrix with rational entries into another real field"""
    return tuple(tuple(fld.from_rational(x.rational_value()) for x in row) for row in matrix)


@dataclass(frozen=True)
class TorusJ:
    """ℝ^{2g}/ℤ^{2g} with complex structure J"""

    g: int
    field: RealAlgField
    J: Matrix
    klattice: Optional[ZLattice] = dc_field(default=None, compare=False)
    quad: Optional[QuadField] = dc_field(default=None, compare=False)

    def __post_init__(self):
        n = 2 * self.g
        if self.g < 1 or len(self.J) != n or any(len(row) != n for row in self.J):
            raise DimensionMismatchError(f"J must be {n}×{n} for g = {self.g}")
        if any(x.field != self.field for row in self.J for x in row):
            raise FieldMismatchError("J has entries outside the torus field")
        square = _mat_mul(self.J, self.J)
        for i in range(n):
            for j in range(n):
                expected = -1 if i == j else 0
                if square[i][j] != self.field.from_rational(expected):
                    raise ValueError("J² ≠ −I")

    @property
    def dim(self) -> int:
        return 2 * self.g

    def is_klattice_backed(self) -> bool:
        return self.klattice is not None and self.quad is not None

    def require_klattice(self) -> Tuple[ZLattice, QuadField]:
        if not self.is_klattice_backed():
            raise NotKLatticeError("this operation needs a torus built from a lattice in K^g")
        return self.klattice, self.quad

    def product(self, other: "TorusJ") -> "TorusJ":
        """The product torus, with J block-diagonal"""
        fld, a, b = self.field, self.J, other.J
        if other.field != fld:
            if other.field.is_rational_field():
                b = _relift(fld, b)
            elif fld.is_rational_field():
                fld, a = other.field, _relift(other.field, a)
            else:
                raise FieldMismatchError("tori are defined over different real fields")
        n, m = len(a), len(b)
        rows = [tuple(a[i]) + tuple(fld.zero for _ in range(m)) for i in range(n)]
        rows += [tuple(fld.zero for _ in range(n)) + tuple(b[i]) for i in range(m)]
        klattice = quad = None
        if self.is_klattice_backed() and other.is_klattice_backed() and self.quad == other.quad:
            klattice, quad = direct_sum(self.klattice, other.klattice), self.quad
        return TorusJ(self.g + other.g, fld, tuple(rows), klattice, quad)

    def change_basis(self, u: Sequence[Sequence[int]]) -> "TorusJ":
        """J′ = U⁻¹·J·U for a unimodular integer matrix U"""
        rows = [tuple(Fraction(x) for x in row) for row in u]
        inverse = linalg.inverse(rows)
        if any(x.denominator != 1 for row in inverse for x in row):
            raise ValueError("change of basis is not unimodular")
        conj = _mat_mul(_mat_mul(_lift_matrix(self.field, inverse), self.J), _lift_matrix(self.field, rows))
        return TorusJ(self.g, self.field, conj)

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "field": {"minpoly": [str(c) for c in self.field.minpoly], "interval": [str(x) for x in self.field.interval]},
            "J": [[[str(c) for c in x.coeffs] for x in row] for row in self.J],
            "d": self.quad.d if self.quad else None,
        }


# ------------------------------------------------------------ constructors


def torus_from_klattice(lattice: ZLattice, quad: QuadField) -> TorusJ:
    """Torus K^g/Δ for a full lattice Δ in K^g read as ℚ^{2g}"""
    n = lattice.ambient_dim
    if n == 0 or n % 2 or lattice.rank != n:
        raise RankError(f"need a full lattice in an even-dimensional space, got rank {lattice.rank} in Q^{n}")
    g = n // 2
    bt = linalg.transpose(list(lattice.basis), n)
    m = linalg.mat_mul(linalg.mat_mul(linalg.inverse(bt), quad.mu_matrix(g)), bt)
    fld = RealAlgField.sqrt(quad.d)
    if fld.is_rational_field():
        root = math.isqrt(quad.d)
        j = tuple(tuple(fld.from_rational(x / root) for x in row) for row in m)
    else:
        # x/√d = (x/d)·√d
        j = tuple(tuple(fld.element([0, x / quad.d]) for x in row) for row in m)
    logger.debug("torus from lattice", g=g, d=quad.d)
    return TorusJ(g, fld, j, lattice, quad)


def torus_from_period(x: RealAlgElem, y: RealAlgElem) -> TorusJ:
    """
    The elliptic curve ℂ/(ℤ + ℤτ) for τ = x + iy with y > 0, in the basis (1, τ).
    """
    if x.field != y.field:
        raise FieldMismatchError("real and imaginary parts live in different fields")
    if sign_of(y) <= 0:
        raise ValueError("the period needs a positive imaginary part")
    inv = y.inverse()
    j = ((-x * inv, -(x * x + y * y) * inv), (inv, x * inv))
    return TorusJ(1, x.field, j)


# -------------------------------------------------------------- Hodge data


@dataclass(frozen=True)
class EndAlgebra:
    """ℚ-basis of the rational matrices commuting with J"""

    basis: Tuple[RationalMatrix, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, matrix: Sequence[Sequence[Fraction]]) -> bool:
        flat = [tuple(x for row in m for x in row) for m in self.basis]
        target = tuple(Fraction(x) for row in matrix for x in row)
        width = len(target)
        return linalg.rank(flat + [target], width) == linalg.rank(flat, width)


def endomorphism_algebra(torus: TorusJ) -> EndAlgebra:
    """End(T) ⊗ ℚ acting on H₁(T, ℚ): rational X with X·J = J·X"""
    n, j, fld = torus.dim, torus.J, torus.field
    rows = []
    for i, k in cartesian(range(n), range(n)):
        coeffs = [fld.zero] * (n * n)
        for t in range(n):
            coeffs[i * n + t] = coeffs[i * n + t] + j[t][k]
            coeffs[t * n + k] = coeffs[t * n + k] - j[i][t]
        rows.append(coeffs)
    system = scalarize(rows, fld=fld)
    kernel = linalg.nullspace(list(system.rows), n * n)
    basis = tuple(tuple(tuple(v[i * n : (i + 1) * n]) for i in range(n)) for v in kernel)
    logger.debug("endomorphism algebra", g=torus.g, dim=len(basis))
    return EndAlgebra(basis)


def _invariant_forms(torus: TorusJ, sign: int) -> int:
    """dim {rational alternating Ω : Jᵀ·Ω·J = sign·Ω}"""
    n, j, fld = torus.dim, torus.J, torus.field
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    rows = []
    for k, l in pairs:
        row = []
        for a, b in pairs:
            entry = j[a][k] * j[b][l] - j[b][k] * j[a][l]
            if (k, l) == (a, b):
                entry = entry - sign
            row.append(entry)
        rows.append(row)
    system = scalarize(rows, fld=fld)
    return len(pairs) - linalg.rank(list(system.rows), len(pairs))


def picard_number(torus: TorusJ) -> int:
    """Dimension of the J-invariant rational alternating forms, the rational (1,1)-classes"""
    return _invariant_forms(torus, 1)


def h20_02_dim(torus: TorusJ) -> int:
    """Dimension of the J-anti-invariant rational alternating forms"""
    return _invariant_forms(torus, -1)


@dataclass(frozen=True)
class CMReport:
    """
    Executable fragment of the CM equivalences for a torus.

    A condition of None does not apply (the Picard and (2,0)+(0,2) conditions are
    automatic for curves). ``consistent`` is only asserted for g ≤ 2.
    """

    g: int
    rho: int
    h20_02: int
    end_dim: int
    picard_maximal: Optional[bool]
    h20_02_rational: Optional[bool]
    end_maximal: bool
    consistent: Optional[bool]

    @property
    def cm(self) -> bool:
        return self.end_maximal

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "rho": self.rho,
            "h20_02": self.h20_02,
            "end_dim": self.end_dim,
            "conditions": {
                "picard_maximal": self.picard_maximal,
                "h20_02_rational": self.h20_02_rational,
                "end_maximal": self.end_maximal,
            },
            "consistent": self.consistent,
            "cm": self.cm,
        }


def cm_report(torus: TorusJ) -> CMReport:
    g = torus.g
    rho, h20, end_dim = picard_number(torus), h20_02_dim(torus), endomorphism_algebra(torus).dim
    end_maximal = end_dim == 2 * g * g
    if g == 1:
        report = CMReport(g, rho, h20, end_dim, None, None, end_maximal, True)
    else:
        picard_maximal = rho == g * g
        h20_rational = h20 == math.comb(2 * g, 2) - g * g
        consistent = picard_maximal == h20_rational == end_maximal if g == 2 else None
        report = CMReport(g, rho, h20, end_dim, picard_maximal, h20_rational, end_maximal, consistent)
    if report.consistent is False:
        logger.warning("cm conditions disagree", **report.to_dict())
    return report


# ----------------------------------------------------------------- orders


def ring_of_integers(quad: QuadField) -> ZLattice:
    return lattice_from_generators(2, [x.pair() for x in quad.integer_basis()])


@dataclass(frozen=True)
class CMOrder:
    """The order ℤ + f·O_K"""

    field: QuadField
    conductor: int

    def lattice(self) -> ZLattice:
        one, omega = self.field.integer_basis()
        return lattice_from_generators(2, [one.pair(), (omega * self.conductor).pair()])

    def to_dict(self) -> dict:
        return {"d": self.field.d, "field": self.field.label, "conductor": self.conductor}


def multiplier_ring(lattice: ZLattice, quad: QuadField) -> ZLattice:
    """{λ ∈ K : λ·Γ ⊆ Γ} as a lattice in ℚ²"""
    if lattice.ambient_dim != 2 or lattice.rank != 2:
        raise RankError("a full lattice in K is required")
    out = None
    for row in lattice.basis:
        inv = quad.from_pair(row).inverse()
        scaled = lattice_from_generators(2, [(inv * quad.from_pair(g)).pair() for g in lattice.basis])
        out = scaled if out is None else intersect(out, scaled)
    return out


def endomorphism_order(curve: TorusJ) -> CMOrder:
    """Identify End(ℂ/Γ) as ℤ + f·O_K"""
    if curve.g != 1:
        raise DimensionMismatchError(f"endomorphism orders are computed for curves, got g = {curve.g}")
    lattice, quad = curve.require_klattice()
    order = multiplier_ring(lattice, quad)
    maximal = ring_of_integers(quad)
    conductor = int(index_in(order, maximal))
    result = CMOrder(quad, conductor)
    if result.lattice() != order:
        raise ArithmeticError("multiplier ring is not of the form Z + f O_K")
    logger.debug("endomorphism order", d=quad.d, conductor=conductor)
    return result


def cm_field(curve: TorusJ) -> Optional[QuadField]:
    """
    The field End(E) ⊗ ℚ of an elliptic curve, or None without CM.

    A non-scalar rational endomorphism X satisfies X² − tX + n = 0 with
    t² − 4n < 0; the field is ℚ(√(t² − 4n)).
    """
    if curve.g != 1:
        raise DimensionMismatchError(f"CM fields are computed for curves, got g = {curve.g}")
    algebra = endomorphism_algebra(curve)
    if algebra.dim < 2:
        return None
    x = next(m for m in algebra.basis if m[0][1] or m[1][0] or m[0][0] != m[1][1])
    trace, det = x[0][0] + x[1][1], x[0][0] * x[1][1] - x[0][1] * x[1][0]
    disc = -(trace * trace - 4 * det)
    # squarefree part of the positive rational disc
    d = 1
    for p, e in factorint(disc.numerator * disc.denominator).items():
        if e % 2:
            d *= p
    return QuadField(d)


# ---------------------------------------------------------------- subtori


def line_height(lam: QuadElem) -> int:
    """
    Height of the K-line through (1, λ): with m the least positive integer such
    that mλ is integral, the height is max(m², N(mλ)).
    """
    one, omega = lam.field.integer_basis()
    if omega == lam.field.sqrt_neg_d:
        coords = (lam.a, lam.b)
    else:
        coords = (lam.a - lam.b, 2 * lam.b)
    m = math.lcm(*(c.denominator for c in coords))
    return max(m * m, int((lam * m).norm()))


def _line_slopes(quad: QuadField, bound: int) -> List[QuadElem]:
    """All λ with line_height(λ) ≤ bound"""
    one, omega = quad.integer_basis()
    reach = 2 * math.isqrt(bound) + 2
    slopes = set()
    for m in range(1, math.isqrt(bound) + 1):
        for u, v in cartesian(range(-reach, reach + 1), repeat=2):
            mu = one * u + omega * v
            if mu.norm() > bound:
                continue
            lam = mu / m
            if line_height(lam) <= bound:
                slopes.add(lam)
    return sorted(slopes, key=lambda z: (z.a, z.b))


def line_subspace(quad: QuadField, v: Sequence[QuadElem]) -> QSubspace:
    w = [quad.sqrt_neg_d * z for z in v]
    return QSubspace(2 * len(v), [quad.flatten(v), quad.flatten(w)])


def line_lattice(lattice: ZLattice, quad: QuadField, v: Sequence[QuadElem]) -> ZLattice:
    """(K·v) ∩ Δ"""
    if all(z.is_zero() for z in v):
        raise NotComplexLineError("the zero vector spans no line")
    span = line_subspace(quad, v)
    return saturate(ZLattice(lattice.ambient_dim, span.basis), ambient=lattice)


def line_lattice_in_k(sub: ZLattice, quad: QuadField) -> ZLattice:
    """
    Pull a rank-2 lattice on a K-line in K² back to K through the first K-coordinate
    that does not vanish on the line.
    """
    if sub.ambient_dim != 4 or sub.rank != 2:
        raise RankError("a rank-2 lattice in K^2 is required")
    if not stable_under(QSubspace.span_of(sub), quad.mu_matrix(2)):
        raise NotComplexLineError("the lattice does not span a K-line")
    first = quad.unflatten(sub.basis[0])
    k = 0 if not first[0].is_zero() else 1
    points = [quad.unflatten(row) for row in sub.basis]
    rep = first[k]
    direction = [z / rep for z in first]
    values = []
    for p in points:
        lam = p[k]
        if [lam * z for z in direction] != list(p):
            raise NotComplexLineError("the lattice does not lie on one K-line")
        values.append(lam.pair())
    return lattice_from_generators(2, values)


@dataclass(frozen=True)
class EllipticSubtorus:
    """A K-line in K² with its lattice L ∩ Δ"""

    representative: Tuple[QuadElem, QuadElem]
    height: int
    lattice: ZLattice
    covolume_ratio: Fraction

    def to_dict(self) -> dict:
        return {
            "line": [str(z) for z in self.representative],
            "height": self.height,
            "lattice": self.lattice.to_dict(),
            "covolume_ratio": str(self.covolume_ratio),
        }


def _require_surface(torus: TorusJ) -> Tuple[ZLattice, QuadField]:
    lattice, quad = torus.require_klattice()
    if torus.g != 2:
        raise DimensionMismatchError(f"subtori are enumerated on surfaces, got g = {torus.g}")
    return lattice, quad


def enumerate_elliptic_subtori(torus: TorusJ, height_bound: int) -> List[EllipticSubtorus]:
    """
    Every K-line of height at most height_bound with its sublattice L ∩ Δ, ordered by
    representative; (0, 1) and (1, λ) are the representatives.

    The height of K·(1, λ) is max(m², N(mλ)) with m the least positive integer such
    that mλ ∈ O_K (see ``line_height``); K·(0, 1) has height 1. Over ℤ[i] the bound 1
    gives six lines: (0, 1) and (1, λ) for λ ∈ {0, 1, −1, i, −i}.
    """
    if height_bound < 1:
        raise ValueError("height bound must be positive")
    lattice, quad = _require_surface(torus)
    integral = direct_sum(ring_of_integers(quad), ring_of_integers(quad))
    mu = quad.mu_matrix(2)
    lines = [(quad.zero, quad.one)] + [(quad.one, lam) for lam in _line_slopes(quad, height_bound)]
    out = []
    for rep in lines:
        if not stable_under(line_subspace(quad, rep), mu):
            raise NotComplexLineError(f"{rep} does not span a K-line")
        sub = line_lattice(lattice, quad, rep)
        ref = line_lattice(integral, quad, rep)
        height = 1 if rep[0].is_zero() else line_height(rep[1])
        out.append(EllipticSubtorus(rep, height, sub, covolume_ratio(sub, ref)))
    out.sort(key=lambda s: quad.flatten(s.representative))
    logger.info("elliptic subtori enumerated", d=quad.d, height=height_bound, lines=len(out))
    return out


@dataclass(frozen=True)
class IsogenyDecomposition:
    lines: Tuple[Tuple[QuadElem, QuadElem], Tuple[QuadElem, QuadElem]]
    sublattices: Tuple[ZLattice, ZLattice]
    degree: int

    def curves(self, quad: QuadField) -> Tuple[TorusJ, TorusJ]:
        return tuple(torus_from_klattice(line_lattice_in_k(m, quad), quad) for m in self.sublattices)

    def to_dict(self) -> dict:
        return {
            "lines": [[str(z) for z in line] for line in self.lines],
            "sublattices": [m.to_dict() for m in self.sublattices],
            "degree": self.degree,
        }


def decompose_isogeny(torus: TorusJ) -> IsogenyDecomposition:
    """T is isogenous to (K·e₁)/M₁ × (K·e₂)/M₂ with degree [Δ : M₁ ⊕ M₂]"""
    lattice, quad = _require_surface(torus)
    lines = ((quad.one, quad.zero), (quad.zero, quad.one))
    m1, m2 = (line_lattice(lattice, quad, line) for line in lines)
    degree = int(index_in(lattice_sum(m1, m2), lattice))
    logger.debug("isogeny decomposition", d=quad.d, degree=degree)
    return IsogenyDecomposition(lines, (m1, m2), degree)
