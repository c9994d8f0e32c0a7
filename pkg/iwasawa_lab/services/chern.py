"""
First Chern Class of the Iwasawa Bundle

The class is represented by its values on lattice 2-cycles: the matrix of the
cocycle q on the canonical basis of Δ, with values in K. Being of type (2,0)
is checked as K-bilinearity of the alternating form, and restriction to a
K-line must give the zero form.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

import structlog

from iwasawa_lab.services.errors import NotComplexLineError, NotSublatticeError, RankError
from iwasawa_lab.services.exact_fields import QuadElem, QuadField
from iwasawa_lab.services.heisenberg import Gram, IwasawaData, LieVector, bracket
from iwasawa_lab.services.zlattice import QSubspace, ZLattice, member, stable_under

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class CocycleForm:
    """An alternating ℚ-bilinear form on Δ with values in K, given on Δ's basis"""

    quad: QuadField
    delta: ZLattice
    gamma: ZLattice
    gram: Gram

    def evaluate(self, v: Sequence[Fraction], w: Sequence[Fraction]) -> QuadElem:
        """q(v, w) for v, w in the rational span of Δ"""
        cv, cw = self.delta.coordinates(v), self.delta.coordinates(w)
        if cv is None or cw is None:
            raise NotSublatticeError("vector outside the rational span of delta")
        acc = self.quad.zero
        for i, x in enumerate(cv):
            if not x:
                continue
            for j, y in enumerate(cw):
                if y:
                    acc = acc + self.gram[i][j] * (x * y)
        return acc

    def to_dict(self) -> dict:
        return {
            "d": self.quad.d,
            "delta": self.delta.to_dict(),
            "gamma": self.gamma.to_dict(),
            "gram": [[str(z) for z in row] for row in self.gram],
        }


def chern_form(data: IwasawaData) -> CocycleForm:
    return CocycleForm(data.field, data.delta, data.gamma, data.q)


@dataclass
class HolomorphicTypeCertificate:
    alternating: bool
    k_bilinear: bool
    nondegenerate: bool
    values_in_gamma: bool
    witnesses: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.alternating and self.k_bilinear and self.nondegenerate

    def to_dict(self) -> dict:
        return {
            "alternating": self.alternating,
            "k_bilinear": self.k_bilinear,
            "nondegenerate": self.nondegenerate,
            "values_in_gamma": self.values_in_gamma,
            "passed": self.passed,
            "witnesses": self.witnesses,
        }


def _fmt(v: Sequence[Fraction]) -> List[str]:
    return [str(x) for x in v]


def verify_holomorphic_type(form: CocycleForm) -> HolomorphicTypeCertificate:
    """
    Check that q is alternating, K-bilinear (q(√−d·v, w) = √−d·q(v, w)) and
    nondegenerate (the K-valued Gram matrix on e₁, e₂ has nonzero determinant).
    """
    quad, basis, gram = form.quad, form.delta.basis, form.gram
    n = len(basis)
    witnesses: Dict[str, Any] = {}

    alternating = True
    for i in range(n):
        for j in range(i, n):
            if gram[i][j] != -gram[j][i]:
                alternating = False
                witnesses["alternating"] = {"pair": [_fmt(basis[i]), _fmt(basis[j])]}
                break
        if not alternating:
            break

    mu = quad.mu_matrix(n // 2)
    root = quad.sqrt_neg_d
    k_bilinear = True
    for i in range(n):
        image = tuple(sum((mu[r][c] * basis[i][c] for c in range(n)), Fraction(0)) for r in range(n))
        for j in range(n):
            lhs, rhs = form.evaluate(image, basis[j]), root * gram[i][j]
            if lhs != rhs:
                k_bilinear = False
                witnesses["k_bilinear"] = {
                    "pair": [_fmt(basis[i]), _fmt(basis[j])],
                    "q(sqrt(-d) v, w)": str(lhs),
                    "sqrt(-d) q(v, w)": str(rhs),
                }
                break
        if not k_bilinear:
            break

    e = [tuple(Fraction(int(k == 2 * t)) for k in range(n)) for t in range(n // 2)]
    k_gram = [[form.evaluate(x, y) for y in e] for x in e]
    det = k_gram[0][0] * k_gram[1][1] - k_gram[0][1] * k_gram[1][0] if len(e) == 2 else quad.zero
    nondegenerate = not det.is_zero()
    if not nondegenerate:
        witnesses["nondegenerate"] = {"gram_determinant": str(det)}

    outside = [
        (i, j) for i in range(n) for j in range(i + 1, n) if not member(gram[i][j].pair(), form.gamma)
    ]
    if outside:
        i, j = outside[0]
        witnesses["values_in_gamma"] = {"pair": [_fmt(basis[i]), _fmt(basis[j])], "value": str(gram[i][j])}

    certificate = HolomorphicTypeCertificate(alternating, k_bilinear, nondegenerate, not outside, witnesses)
    if not certificate.passed:
        logger.warning("holomorphic type check failed", **witnesses)
    return certificate


@dataclass(frozen=True)
class RestrictedForm:
    sublattice: ZLattice
    matrix: Tuple[Tuple[QuadElem, ...], ...]

    @property
    def is_zero(self) -> bool:
        return all(z.is_zero() for row in self.matrix for z in row)

    def to_dict(self) -> dict:
        return {
            "sublattice": self.sublattice.to_dict(),
            "matrix": [[str(z) for z in row] for row in self.matrix],
            "zero": self.is_zero,
        }


def restrict_to_subtorus(form: CocycleForm, sub: ZLattice) -> RestrictedForm:
    """q on Λ²M for a rank-2 sublattice M of Δ spanning a K-line"""
    if not form.delta.contains_lattice(sub):
        raise NotSublatticeError("the subtorus lattice is not contained in delta")
    if sub.rank != 2:
        raise RankError(f"a subtorus lattice has rank 2, got {sub.rank}")
    if not stable_under(QSubspace.span_of(sub), form.quad.mu_matrix(sub.ambient_dim // 2)):
        raise NotComplexLineError("the sublattice does not span a K-line")
    matrix = tuple(tuple(form.evaluate(v, w) for w in sub.basis) for v in sub.basis)
    return RestrictedForm(sub, matrix)


def bracket_consistency(form: CocycleForm) -> bool:
    """q(v, w) equals the central part of [h(v), h(w)] on every basis pair"""
    quad = form.quad
    lifts = [LieVector.lift(quad.unflatten(row)) for row in form.delta.basis]
    return all(
        bracket(lifts[i], lifts[j]).z == form.gram[i][j] for i in range(len(lifts)) for j in range(len(lifts))
    )
