"""
Input Documents

One schema shared by every command, discriminated by ``kind``:

* ``heisenberg``: group generators over ℚ(√−d)
* ``construct``: lattice data (Δ, Γ, d) for the lattice constructor
* ``torus``: a lattice in K^g, an explicit complex structure J, or a period
* ``ce-algebra``: a presentation of a bigraded dg-algebra

Rationals are "p/q" strings; unknown fields are rejected.
"""

from fractions import Fraction
from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, TypeAdapter, field_validator, model_validator

from iwasawa_lab.services.ce_cohomology import CEAlgebra
from iwasawa_lab.services.exact_fields import QuadElem, QuadField, RealAlgElem, RealAlgField
from iwasawa_lab.services.heisenberg import HeisPoint
from iwasawa_lab.services.tori_hodge import TorusJ, torus_from_klattice, torus_from_period
from iwasawa_lab.services.zlattice import ZLattice
from iwasawa_lab.utils.codec import decode_real, parse_rational

Rational = Annotated[Fraction, BeforeValidator(parse_rational), PlainSerializer(str, return_type=str)]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True, populate_by_name=True)


class FieldSpec(_Strict):
    d: int = Field(..., description="Squarefree positive integer; the field is Q(sqrt(-d))")

    @field_validator("d")
    @classmethod
    def _squarefree(cls, d: int) -> int:
        QuadField(d)
        return d

    def quad(self) -> QuadField:
        return QuadField(self.d)


class QuadElemSpec(_Strict):
    a: Rational = Field(Fraction(0), description="Rational part")
    b: Rational = Field(Fraction(0), description="Coefficient of sqrt(-d)")

    def to_elem(self, quad: QuadField) -> QuadElem:
        return quad(self.a, self.b)


class HeisPointSpec(_Strict):
    a: QuadElemSpec = Field(default_factory=QuadElemSpec)
    b: QuadElemSpec = Field(default_factory=QuadElemSpec)
    c: QuadElemSpec = Field(default_factory=QuadElemSpec)

    def to_point(self, quad: QuadField) -> HeisPoint:
        return HeisPoint(quad, self.a.to_elem(quad), self.b.to_elem(quad), self.c.to_elem(quad))


class ZLatticeSpec(_Strict):
    ambient_dim: int = Field(..., ge=0, description="Dimension m of the ambient Q^m")
    basis: List[List[Rational]] = Field(default_factory=list, description="Generators, one per row")

    @model_validator(mode="after")
    def _row_lengths(self):
        for i, row in enumerate(self.basis):
            if len(row) != self.ambient_dim:
                raise ValueError(f"basis row {i} has length {len(row)}, expected {self.ambient_dim}")
        return self

    def to_lattice(self) -> ZLattice:
        return ZLattice(self.ambient_dim, self.basis)


class RealFieldSpec(_Strict):
    minpoly: List[Rational] = Field(..., min_length=2, description="Monic minimal polynomial, constant term first")
    interval: Tuple[Rational, Rational] = Field(..., description="Isolating interval of the chosen real root")

    @model_validator(mode="after")
    def _valid_field(self):
        self.to_field()
        return self

    def to_field(self) -> RealAlgField:
        return RealAlgField(tuple(self.minpoly), self.interval)


class RealElemSpec(RealFieldSpec):
    """A real algebraic number that carries its own field"""

    coeffs: List[Rational] = Field(..., description="Power-basis coefficients, constant term first")


# Power-basis coefficients in the document's real field, or a self-describing element
RealEntry = Union[List[Rational], RealElemSpec]


def _decode_entry(entry: RealEntry, fld: RealAlgField) -> RealAlgElem:
    if isinstance(entry, RealElemSpec):
        return decode_real(entry.model_dump(mode="json"), fld)
    return decode_real(entry, fld)


class PeriodSpec(_Strict):
    x: RealEntry = Field(..., description="Real part of the period")
    y: RealEntry = Field(..., description="Imaginary part of the period")


class DocumentBase(_Strict):
    version: Literal[1] = Field(1, description="Schema version")
    description: Optional[str] = Field(None, description="Free text shown by `corpus list`")


class HeisenbergDocument(DocumentBase):
    kind: Literal["heisenberg"] = "heisenberg"
    field: FieldSpec
    generators: List[HeisPointSpec] = Field(..., min_length=1)

    def points(self) -> List[HeisPoint]:
        quad = self.field.quad()
        return [g.to_point(quad) for g in self.generators]


class ConstructSpec(_Strict):
    d: int
    delta: ZLatticeSpec
    gamma: ZLatticeSpec

    @field_validator("d")
    @classmethod
    def _squarefree(cls, d: int) -> int:
        QuadField(d)
        return d


class ConstructDocument(DocumentBase):
    kind: Literal["construct"] = "construct"
    construct: ConstructSpec

    def lattice_data(self) -> Tuple[ZLattice, ZLattice, QuadField]:
        spec = self.construct
        return spec.delta.to_lattice(), spec.gamma.to_lattice(), QuadField(spec.d)


class TorusDocument(DocumentBase):
    """Exactly one of: klattice + d, J (+ g, real_field), or period (+ real_field)"""

    kind: Literal["torus"] = "torus"
    klattice: Optional[ZLatticeSpec] = None
    d: Optional[int] = None
    g: Optional[int] = Field(None, ge=1)
    real_field: Optional[RealFieldSpec] = None
    J: Optional[List[List[RealEntry]]] = Field(None, description="Entries as coefficient lists or real elements")
    period: Optional[PeriodSpec] = None

    @model_validator(mode="after")
    def _one_model(self):
        models = [self.klattice is not None, self.J is not None, self.period is not None]
        if sum(models) != 1:
            raise ValueError("give exactly one of klattice, J or period")
        if self.klattice is not None and self.d is None:
            raise ValueError("a klattice torus needs d")
        if self.d is not None:
            QuadField(self.d)
        if self.J is not None and self.g is not None and len(self.J) != 2 * self.g:
            raise ValueError(f"J has {len(self.J)} rows, expected {2 * self.g}")
        return self

    def _entries(self) -> List[RealEntry]:
        if self.period is not None:
            return [self.period.x, self.period.y]
        return [entry for row in self.J or [] for entry in row]

    def real_algebraic_field(self) -> RealAlgField:
        """``real_field`` if given, else the field of the first self-describing entry, else ℚ"""
        if self.real_field is not None:
            return self.real_field.to_field()
        for entry in self._entries():
            if isinstance(entry, RealElemSpec):
                return entry.to_field()
        return RealAlgField.rational()

    def torus(self) -> TorusJ:
        if self.klattice is not None:
            return torus_from_klattice(self.klattice.to_lattice(), QuadField(self.d))
        fld = self.real_algebraic_field()
        if self.period is not None:
            return torus_from_period(_decode_entry(self.period.x, fld), _decode_entry(self.period.y, fld))
        j = tuple(tuple(_decode_entry(entry, fld) for entry in row) for row in self.J)
        return TorusJ(self.g or len(j) // 2, fld, j)


class CEGeneratorSpec(_Strict):
    name: str
    p: int = Field(..., ge=0, le=1)
    q: int = Field(..., ge=0, le=1)


class CEAlgebraDocument(DocumentBase):
    kind: Literal["ce-algebra"] = "ce-algebra"
    generators: List[CEGeneratorSpec] = Field(..., min_length=1)
    d: Dict[str, List[Tuple[Rational, str, str]]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _known_names(self):
        names = {g.name for g in self.generators}
        for target, terms in self.d.items():
            if target not in names:
                raise ValueError(f"differential given for unknown generator {target!r}")
            for _, left, right in terms:
                if left not in names or right not in names:
                    raise ValueError(f"d{target} uses an unknown generator")
        return self

    def algebra(self) -> CEAlgebra:
        gens = [(g.name, g.p, g.q) for g in self.generators]
        return CEAlgebra.from_presentation(gens, {k: [tuple(t) for t in v] for k, v in self.d.items()})


InputDocument = Annotated[
    Union[HeisenbergDocument, ConstructDocument, TorusDocument, CEAlgebraDocument],
    Field(discriminator="kind"),
]

input_document_adapter = TypeAdapter(InputDocument)
