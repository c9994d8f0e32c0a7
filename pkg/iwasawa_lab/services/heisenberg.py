"""
Complex Heisenberg Group

Group law, log/exp and BCH on the Heisenberg group over K = ℚ(√−d), validation
of finitely generated subgroups as cocompact lattices and the extraction of
the base lattice Δ ⊂ K², the fiber lattice Γ ⊂ K and the cocycle q.

A point (a, b, c) is the unipotent matrix with first row (1, a, c) and second
row (0, 1, b). Lattices are kept as group generators; the central lattice is
computed from commutators and from the central defects of relation words, since
the set of logarithms of a lattice is in general not an additive group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import structlog

from iwasawa_lab.services.errors import (
    CocycleConditionViolated,
    FieldMismatchError,
    NotCocompactError,
    RankError,
    ZeroVectorError,
)
from iwasawa_lab.services.exact_fields import QuadElem, QuadField
from iwasawa_lab.services.zlattice import (
    ZLattice,
    integer_left_kernel,
    lattice_from_generators,
    member,
)

logger = structlog.get_logger(__name__)

KVector = Tuple[QuadElem, QuadElem]
Gram = Tuple[Tuple[QuadElem, ...], ...]


@dataclass(frozen=True)
class HeisPoint:
    """(a, b, c) ↔ [[1, a, c], [0, 1, b], [0, 0, 1]]"""

    field: QuadField
    a: QuadElem
    b: QuadElem
    c: QuadElem

    @classmethod
    def identity(cls, fld: QuadField) -> "HeisPoint":
        return cls(fld, fld.zero, fld.zero, fld.zero)

    @classmethod
    def central(cls, c: QuadElem) -> "HeisPoint":
        return cls(c.field, c.field.zero, c.field.zero, c)

    def projection(self) -> KVector:
        return (self.a, self.b)

    def is_central(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def __mul__(self, other: "HeisPoint") -> "HeisPoint":
        return heis_mul(self, other)

    def to_dict(self) -> dict:
        return {name: [str(z.a), str(z.b)] for name, z in (("a", self.a), ("b", self.b), ("c", self.c))}


@dataclass(frozen=True)
class LieVector:
    """(x, y, z) in the Lie algebra, with the centre {(0, 0, z)}"""

    field: QuadField
    x: QuadElem
    y: QuadElem
    z: QuadElem

    @classmethod
    def lift(cls, v: KVector) -> "LieVector":
        """The canonical lift h(v) = (v, 0)"""
        fld = v[0].field
        return cls(fld, v[0], v[1], fld.zero)

    def _check(self, other: "LieVector"):
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field.label} vs {other.field.label}")

    def __add__(self, other: "LieVector") -> "LieVector":
        self._check(other)
        return LieVector(self.field, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "LieVector") -> "LieVector":
        self._check(other)
        return LieVector(self.field, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "LieVector":
        return LieVector(self.field, -self.x, -self.y, -self.z)

    def scaled(self, k) -> "LieVector":
        return LieVector(self.field, self.x * k, self.y * k, self.z * k)

    def is_zero(self) -> bool:
        return self.x.is_zero() and self.y.is_zero() and self.z.is_zero()


def _same_field(*items):
    fields = {item.field for item in items}
    if len(fields) > 1:
        raise FieldMismatchError("operands live over different quadratic fields")


def heis_mul(g: HeisPoint, h: HeisPoint) -> HeisPoint:
    """(a,b,c)·(a′,b′,c′) = (a+a′, b+b′, c+c′+a·b′)"""
    _same_field(g, h)
    return HeisPoint(g.field, g.a + h.a, g.b + h.b, g.c + h.c + g.a * h.b)


def heis_inv(g: HeisPoint) -> HeisPoint:
    return HeisPoint(g.field, -g.a, -g.b, -g.c + g.a * g.b)


def heis_log(g: HeisPoint) -> LieVector:
    return LieVector(g.field, g.a, g.b, g.c - g.a * g.b * Fraction(1, 2))


def heis_exp(v: LieVector) -> HeisPoint:
    return HeisPoint(v.field, v.x, v.y, v.z + v.x * v.y * Fraction(1, 2))


def heis_pow(g: HeisPoint, n: int) -> HeisPoint:
    """gⁿ = exp(n·log g) for any integer n"""
    return heis_exp(heis_log(g).scaled(n))


def heis_commutator(g: HeisPoint, h: HeisPoint) -> HeisPoint:
    """g·h·g⁻¹·h⁻¹, always central"""
    return heis_mul(heis_mul(g, h), heis_mul(heis_inv(g), heis_inv(h)))


def bracket(u: LieVector, v: LieVector) -> LieVector:
    """[(x₁,y₁,z₁), (x₂,y₂,z₂)] = (0, 0, x₁y₂ − y₁x₂)"""
    _same_field(u, v)
    zero = u.field.zero
    return LieVector(u.field, zero, zero, u.x * v.y - u.y * v.x)


def bch(u: LieVector, v: LieVector) -> LieVector:
    """X + Y + ½[X, Y]; exact because the group is 2-step nilpotent"""
    return u + v + bracket(u, v).scaled(Fraction(1, 2))


def cocycle(v: KVector, w: KVector) -> QuadElem:
    """q(v, w) = v₁w₂ − v₂w₁, the central value of the commutator of lifts"""
    _same_field(v[0], v[1], w[0], w[1])
    return v[0] * w[1] - v[1] * w[0]


def cocycle_rational(fld: QuadField, v: Sequence[Fraction], w: Sequence[Fraction]) -> Tuple[Fraction, Fraction]:
    """q on K² read as ℚ⁴, with the value in K read as ℚ²"""
    return cocycle(fld.unflatten(v), fld.unflatten(w)).pair()


def gram_matrix(fld: QuadField, lattice: ZLattice) -> Gram:
    """Matrix of q on the lattice's canonical basis"""
    vectors = [fld.unflatten(row) for row in lattice.basis]
    return tuple(tuple(cocycle(v, w) for w in vectors) for v in vectors)


# ---------------------------------------------------------------- lattices


@dataclass(frozen=True)
class IwasawaData:
    """(Δ, Γ, q) with q given by its matrix on Δ's canonical basis"""

    field: QuadField
    delta: ZLattice
    gamma: ZLattice
    q: Gram

    def q_values(self) -> List[Tuple[Fraction, Fraction]]:
        n = len(self.q)
        return [self.q[i][j].pair() for i in range(n) for j in range(i + 1, n)]

    def to_dict(self) -> dict:
        return {
            "d": self.field.d,
            "delta": self.delta.to_dict(),
            "gamma": self.gamma.to_dict(),
            "q": [[[str(z.a), str(z.b)] for z in row] for row in self.q],
        }


@dataclass(frozen=True)
class HeisLattice:
    """A validated cocompact lattice together with its derived data"""

    field: QuadField
    generators: Tuple[HeisPoint, ...]
    delta: ZLattice
    gamma: ZLattice
    q: Gram = dc_field(compare=False)

    def base_torus(self):
        from iwasawa_lab.services.tori_hodge import torus_from_klattice

        return torus_from_klattice(self.delta, self.field)

    def fiber_curve(self):
        from iwasawa_lab.services.tori_hodge import torus_from_klattice

        return torus_from_klattice(self.gamma, self.field)

    def to_dict(self) -> dict:
        return {
            "d": self.field.d,
            "generators": len(self.generators),
            "delta": self.delta.to_dict(),
            "gamma": self.gamma.to_dict(),
        }


def _word_value(gens: Sequence[HeisPoint], exponents: Sequence[int]) -> HeisPoint:
    out = HeisPoint.identity(gens[0].field)
    for g, n in zip(gens, exponents):
        if n:
            out = heis_mul(out, heis_pow(g, n))
    return out


def central_sources(gens: Sequence[HeisPoint]) -> Dict[str, List[Tuple[Fraction, Fraction]]]:
    """Central values generating Λ ∩ Z(G), grouped by where they come from"""
    fld = gens[0].field
    projections = [fld.flatten(g.projection()) for g in gens]
    central = [g.c.pair() for g in gens if g.is_central()]
    commutators = [
        cocycle(gens[i].projection(), gens[j].projection()).pair()
        for i in range(len(gens))
        for j in range(i + 1, len(gens))
    ]
    relations = []
    for exponents in integer_left_kernel(projections):
        word = _word_value(gens, exponents)
        if not word.is_central():
            raise ArithmeticError("relation word with nonzero abelianization")
        relations.append(word.c.pair())
    return {"central": central, "commutators": commutators, "relations": relations}


def validate_lattice(gens: Sequence[HeisPoint]) -> HeisLattice:
    """
    Decide whether the generators span a cocompact lattice and derive (Δ, Γ, q).

    Raises NotCocompactError naming the deficient rank.
    """
    if not gens:
        raise ValueError("at least one generator is required")
    _same_field(*gens)
    fld = gens[0].field
    delta = lattice_from_generators(4, [fld.flatten(g.projection()) for g in gens])
    if delta.rank != 4:
        logger.warning("lattice rejected", which="delta", rank=delta.rank)
        raise NotCocompactError("delta", delta.rank, 4)
    sources = central_sources(gens)
    gamma = lattice_from_generators(2, [v for values in sources.values() for v in values])
    if gamma.rank != 2:
        logger.warning("lattice rejected", which="gamma", rank=gamma.rank)
        raise NotCocompactError("gamma", gamma.rank, 2)
    lattice = HeisLattice(fld, tuple(gens), delta, gamma, gram_matrix(fld, delta))
    logger.info("lattice validated", d=fld.d, generators=len(gens), relations=len(sources["relations"]))
    return lattice


def extract_iwasawa(lattice: HeisLattice) -> IwasawaData:
    """(Δ, Γ, q) of a validated lattice; q(Λ²Δ) ⊆ Γ is re-checked on the basis"""
    data = IwasawaData(lattice.field, lattice.delta, lattice.gamma, lattice.q)
    n = len(data.q)
    for i in range(n):
        for j in range(i + 1, n):
            if not member(data.q[i][j].pair(), data.gamma):
                pair = (lattice.field.unflatten(data.delta.basis[i]), lattice.field.unflatten(data.delta.basis[j]))
                raise CocycleConditionViolated(pair=pair, value=data.q[i][j], indices=(i, j))
    logger.debug("iwasawa data extracted", d=lattice.field.d)
    return data


def check_cocycle_condition(delta: ZLattice, gamma: ZLattice, fld: QuadField) -> Optional[CocycleConditionViolated]:
    """The first basis pair with q(δᵢ, δⱼ) ∉ Γ, as an unraised error, or None"""
    for i in range(delta.rank):
        for j in range(i + 1, delta.rank):
            v, w = fld.unflatten(delta.basis[i]), fld.unflatten(delta.basis[j])
            value = cocycle(v, w)
            if not member(value.pair(), gamma):
                return CocycleConditionViolated(pair=(v, w), value=value, indices=(i, j))
    return None


def construct_iwasawa(delta: ZLattice, gamma: ZLattice, fld: QuadField) -> HeisLattice:
    """
    Build the lattice generated by exp((δᵢ, 0)) and (0, 0, γⱼ).

    Requires rank(Δ) = 4, rank(Γ) = 2 and q(Λ²Δ) ⊆ Γ; the extracted Δ and Γ of the
    result equal the inputs.
    """
    if delta.ambient_dim != 4 or delta.rank != 4:
        raise RankError(f"delta must have rank 4 in Q^4, got rank {delta.rank} in Q^{delta.ambient_dim}")
    if gamma.ambient_dim != 2 or gamma.rank != 2:
        raise RankError(f"gamma must have rank 2 in Q^2, got rank {gamma.rank} in Q^{gamma.ambient_dim}")
    violation = check_cocycle_condition(delta, gamma, fld)
    if violation is not None:
        logger.warning("cocycle condition violated", indices=violation.indices, value=str(violation.value))
        raise violation
    gens = [heis_exp(LieVector.lift(fld.unflatten(row))) for row in delta.basis]
    gens += [HeisPoint.central(fld.from_pair(row)) for row in gamma.basis]
    lattice = validate_lattice(gens)
    if lattice.delta != delta or lattice.gamma != gamma:
        raise ArithmeticError("constructed lattice does not reproduce its input data")
    return lattice


# ----------------------------------------------------------------- splitting


@dataclass(frozen=True)
class SplitCertificate:
    """Lift of a K-line into the Lie algebra with its vanishing brackets"""

    line: KVector
    basis: Tuple[LieVector, LieVector]
    brackets: Tuple[QuadElem, ...]
    q_restriction: Tuple[QuadElem, ...]

    @property
    def holds(self) -> bool:
        return all(z.is_zero() for z in self.brackets + self.q_restriction)

    def to_dict(self) -> dict:
        return {
            "line": [str(z) for z in self.line],
            "brackets": [str(z) for z in self.brackets],
            "q_restriction": [str(z) for z in self.q_restriction],
            "holds": self.holds,
        }


def primitive_in_delta(data: IwasawaData, v: KVector) -> KVector:
    """The primitive vector of Δ on the ray ℚ_{>0}·v"""
    if all(z.is_zero() for z in v):
        raise ZeroVectorError("a line needs a nonzero direction")
    _same_field(data, v[0], v[1])
    coords = data.delta.coordinates(data.field.flatten(v))
    if coords is None:
        raise RankError("delta does not span the ambient space")
    scale = math.lcm(*(c.denominator for c in coords))
    ints = [int(c * scale) for c in coords]
    divisor = math.gcd(*ints)
    flat = [
        sum((Fraction(k, divisor) * row[i] for k, row in zip(ints, data.delta.basis)), Fraction(0))
        for i in range(data.delta.ambient_dim)
    ]
    return data.field.unflatten(flat)


def split_over_line(data: IwasawaData, v: KVector) -> SplitCertificate:
    """
    Basis {h(v), h(√−d·v)} of the lifted K-line K·v with its bracket certificate.

    v is first replaced by the primitive vector of Δ on its ray, so the certificate
    names the same line whatever multiple of v is given. Zero brackets mean
    h(L) ⊕ 𝔷 is abelian, so the central extension splits over the line.
    """
    primitive = primitive_in_delta(data, v)
    if primitive != tuple(v):
        logger.debug("direction saturated in delta", given=[str(z) for z in v])
    v = primitive
    root = data.field.sqrt_neg_d
    w = (root * v[0], root * v[1])
    basis = (LieVector.lift(v), LieVector.lift(w))
    brackets = tuple(bracket(x, y).z for x in basis for y in basis)
    restriction = (cocycle(v, w), cocycle(w, v))
    return SplitCertificate(v, basis, brackets, restriction)


# ------------------------------------------------------------------- oracles


@dataclass(frozen=True)
class WordOracleResult:
    elements: FrozenSet[HeisPoint]
    central: ZLattice


def word_oracle(generators: Sequence[HeisPoint], max_length: int = 4) -> WordOracleResult:
    """All products of at most max_length generators and inverses, with the central ones"""
    fld = generators[0].field
    letters = list(generators) + [heis_inv(g) for g in generators]
    seen = {HeisPoint.identity(fld)}
    frontier = set(seen)
    for length in range(max_length):
        frontier = {heis_mul(p, g) for p in frontier for g in letters} - seen
        seen |= frontier
        logger.debug("word oracle layer", length=length + 1, new=len(frontier))
    central = lattice_from_generators(2, [p.c.pair() for p in seen if p.is_central()])
    return WordOracleResult(frozenset(seen), central)


def q_generates_gamma(data: IwasawaData) -> bool:
    """True iff the cocycle values span the centre rationally (finite index in Γ)"""
    return lattice_from_generators(2, data.q_values()).rank == 2
