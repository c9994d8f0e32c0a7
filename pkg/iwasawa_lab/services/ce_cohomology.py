"""
Chevalley–Eilenberg Algebras

Finite-dimensional bigraded differential graded algebras over ℚ generated in
degree one: the exterior algebra on named generators with a differential given
on generators and extended by the graded Leibniz rule. Betti numbers and the
pages of the spectral sequence of the filtration by the first degree are
computed from exact ranks.

Monomials are strictly increasing tuples of generator indices, ordered
lexicographically within each degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import structlog

from iwasawa_lab.services import linalg
from iwasawa_lab.services.errors import DifferentialError, JacobiError, NotNilpotentError

logger = structlog.get_logger(__name__)

Monomial = Tuple[int, ...]
Bidegree = Tuple[int, int]


def sort_with_sign(seq: Sequence[int]) -> Tuple[int, Optional[Monomial]]:
    """Sign of the permutation sorting seq, and the sorted tuple; (0, None) on a repeat"""
    if len(set(seq)) != len(seq):
        return 0, None
    items = list(seq)
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return sign, tuple(items)


@dataclass(frozen=True)
class Generator:
    name: str
    p: int
    q: int

    @property
    def bidegree(self) -> Bidegree:
        return (self.p, self.q)


class CEAlgebra:
    """
    Λ(ξ₁, …, ξₙ) with a differential d given by dξₖ = Σ cᵢⱼ ξᵢ∧ξⱼ (i < j).

    d² = 0 is checked on every generator at construction.
    """

    def __init__(self, generators: Sequence[Generator], differential: Mapping[int, Mapping[Tuple[int, int], Fraction]]):
        self.generators: Tuple[Generator, ...] = tuple(generators)
        n = len(self.generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != n:
            raise ValueError("generator names must be distinct")
        for g in self.generators:
            if g.p < 0 or g.q < 0 or g.p + g.q != 1:
                raise ValueError(f"generator {g.name} must have bidegree (1,0) or (0,1)")
        self.differential: Dict[int, Dict[Monomial, Fraction]] = {}
        for k in range(n):
            terms: Dict[Monomial, Fraction] = {}
            for (i, j), c in differential.get(k, {}).items():
                if not (0 <= i < n and 0 <= j < n):
                    raise IndexError(f"generator index out of range in d{names[k]}")
                sign, mono = sort_with_sign((i, j))
                c = Fraction(c)
                if sign == 0 or c == 0:
                    continue
                terms[mono] = terms.get(mono, Fraction(0)) + sign * c
            self.differential[k] = {m: c for m, c in terms.items() if c != 0}
        self._index = {name: i for i, name in enumerate(names)}
        for k in range(n):
            dd = self.gen(names[k]).d().d()
            if not dd.is_zero():
                raise DifferentialError(f"d(d{names[k]}) = {dd} ≠ 0")

    @classmethod
    def from_presentation(
        cls,
        generators: Sequence[Tuple[str, int, int]],
        d: Mapping[str, Iterable[Tuple[Fraction, str, str]]],
    ) -> "CEAlgebra":
        """Build from named generators and {name: [(coeff, gen_i, gen_j), ...]}"""
        gens = [Generator(name, p, q) for name, p, q in generators]
        index = {g.name: i for i, g in enumerate(gens)}
        differential: Dict[int, Dict[Tuple[int, int], Fraction]] = {}
        for name, terms in d.items():
            if name not in index:
                raise KeyError(f"unknown generator {name!r}")
            acc: Dict[Tuple[int, int], Fraction] = {}
            for coeff, left, right in terms:
                if left not in index or right not in index:
                    raise KeyError(f"unknown generator in d{name}: {left!r}, {right!r}")
                if left == right:
                    raise ValueError(f"d{name} contains {left}∧{right}, which vanishes")
                key = (index[left], index[right])
                acc[key] = acc.get(key, Fraction(0)) + Fraction(coeff)
            differential[index[name]] = acc
        return cls(gens, differential)

    @property
    def n(self) -> int:
        return len(self.generators)

    @cached_property
    def _bases(self) -> List[List[Monomial]]:
        return [list(combinations(range(self.n), k)) for k in range(self.n + 1)]

    @cached_property
    def _positions(self) -> List[Dict[Monomial, int]]:
        return [{m: i for i, m in enumerate(basis)} for basis in self._bases]

    def basis(self, k: int) -> List[Monomial]:
        if not 0 <= k <= self.n:
            return []
        return self._bases[k]

    def dim(self, k: int) -> int:
        return len(self.basis(k))

    def bidegree_of(self, mono: Monomial) -> Bidegree:
        return (sum(self.generators[i].p for i in mono), sum(self.generators[i].q for i in mono))

    def has_generator(self, name: str) -> bool:
        return name in self._index

    def index_of(self, name: str) -> int:
        return self._index[name]

    def name_of(self, mono: Monomial) -> str:
        return "∧".join(self.generators[i].name for i in mono) or "1"

    # ----------------------------------------------------------- elements

    def element(self, degree: int, coeffs: Mapping[Monomial, Fraction]) -> "DGElement":
        return DGElement(self, degree, coeffs)

    def one(self) -> "DGElement":
        return DGElement(self, 0, {(): Fraction(1)})

    def zero(self, degree: int) -> "DGElement":
        return DGElement(self, degree, {})

    def gen(self, name: str) -> "DGElement":
        if name not in self._index:
            raise KeyError(f"unknown generator {name!r}")
        return DGElement(self, 1, {(self._index[name],): Fraction(1)})

    def monomial(self, *names: str) -> "DGElement":
        out = self.one()
        for name in names:
            out = out.wedge(self.gen(name))
        return out

    def d_monomial(self, mono: Monomial) -> Dict[Monomial, Fraction]:
        """Graded Leibniz rule: d(ξ_{i₁}∧…) = Σₜ (−1)ᵗ ξ_{i₁}∧…∧dξ_{iₜ}∧…"""
        out: Dict[Monomial, Fraction] = {}
        for t, idx in enumerate(mono):
            for (a, b), c in self.differential[idx].items():
                sign, merged = sort_with_sign(mono[:t] + (a, b) + mono[t + 1 :])
                if sign == 0:
                    continue
                out[merged] = out.get(merged, Fraction(0)) + (-1) ** t * sign * c
        return {m: c for m, c in out.items() if c != 0}

    def d_matrix(self, k: int) -> List[Tuple[Fraction, ...]]:
        """Matrix of d: Λᵏ → Λᵏ⁺¹, rows indexed by target monomials"""
        source, target = self.basis(k), self.basis(k + 1)
        rows = [[Fraction(0)] * len(source) for _ in target]
        positions = self._positions[k + 1] if k + 1 <= self.n else {}
        for col, mono in enumerate(source):
            for image, c in self.d_monomial(mono).items():
                rows[positions[image]][col] = c
        return [tuple(row) for row in rows]

    def d_rank(self, k: int) -> int:
        if k < 0 or k >= self.n:
            return 0
        return linalg.rank(self.d_matrix(k), self.dim(k))

    def is_bigraded(self) -> bool:
        try:
            self.check_bigraded()
        except DifferentialError:
            return False
        return True

    def check_bigraded(self):
        """Every dξ must split into parts of bidegree shift (1,0) and (0,1)"""
        for k, terms in self.differential.items():
            p, q = self.generators[k].bidegree
            for mono in terms:
                shift = tuple(x - y for x, y in zip(self.bidegree_of(mono), (p, q)))
                if shift not in ((1, 0), (0, 1)):
                    raise DifferentialError(
                        f"d{self.generators[k].name} has a component {self.name_of(mono)} of bidegree shift {shift}"
                    )

    def __repr__(self) -> str:
        return f"CEAlgebra({[g.name for g in self.generators]})"


class DGElement:
    """A homogeneous element: a sparse coefficient map over monomials of one degree"""

    def __init__(self, algebra: CEAlgebra, degree: int, coeffs: Mapping[Monomial, Fraction]):
        self.algebra = algebra
        self.degree = degree
        clean: Dict[Monomial, Fraction] = {}
        for mono, c in coeffs.items():
            mono = tuple(mono)
            if len(mono) != degree:
                raise ValueError(f"monomial {mono} does not have degree {degree}")
            c = Fraction(c)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
        self.coeffs: Dict[Monomial, Fraction] = {m: c for m, c in clean.items() if c}

    def _check(self, other: "DGElement"):
        if other.algebra is not self.algebra:
            raise ValueError("elements of different algebras")
        if other.degree != self.degree:
            raise ValueError(f"cannot add degrees {self.degree} and {other.degree}")

    def __add__(self, other: "DGElement") -> "DGElement":
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, Fraction(0)) + c
        return DGElement(self.algebra, self.degree, out)

    def __neg__(self) -> "DGElement":
        return DGElement(self.algebra, self.degree, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: "DGElement") -> "DGElement":
        return self + (-other)

    def __rmul__(self, scalar) -> "DGElement":
        return DGElement(self.algebra, self.degree, {m: c * Fraction(scalar) for m, c in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, DGElement):
            return NotImplemented
        return self.algebra is other.algebra and self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.coeffs.items()))))

    def wedge(self, other: "DGElement") -> "DGElement":
        if other.algebra is not self.algebra:
            raise ValueError("elements of different algebras")
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                sign, merged = sort_with_sign(m1 + m2)
                if sign:
                    out[merged] = out.get(merged, Fraction(0)) + sign * c1 * c2
        return DGElement(self.algebra, self.degree + other.degree, out)

    __xor__ = wedge

    def d(self) -> "DGElement":
        out: Dict[Monomial, Fraction] = {}
        for mono, c in self.coeffs.items():
            for image, e in self.algebra.d_monomial(mono).items():
                out[image] = out.get(image, Fraction(0)) + c * e
        return DGElement(self.algebra, self.degree + 1, out)

    def is_zero(self) -> bool:
        return not self.coeffs

    def vector(self) -> Tuple[Fraction, ...]:
        basis = self.algebra.basis(self.degree)
        return tuple(self.coeffs.get(m, Fraction(0)) for m in basis)

    @classmethod
    def from_vector(cls, algebra: CEAlgebra, degree: int, vector: Sequence[Fraction]) -> "DGElement":
        return cls(algebra, degree, dict(zip(algebra.basis(degree), vector)))

    def to_dict(self) -> dict:
        return {self.algebra.name_of(m): str(c) for m, c in sorted(self.coeffs.items())}

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*{self.algebra.name_of(m)}" for m, c in sorted(self.coeffs.items()))


# ---------------------------------------------------------- constructors


def ce_from_nilpotent_algebra(
    brackets: Mapping[Tuple[int, int], Mapping[int, Fraction]],
    n: int,
    names: Optional[Sequence[str]] = None,
    bidegrees: Optional[Sequence[Bidegree]] = None,
) -> CEAlgebra:
    """
    The Chevalley–Eilenberg algebra of the Lie algebra with [eᵢ, eⱼ] = Σₖ cᵏᵢⱼ eₖ.

    Indices are 0-based; brackets may list (i, j) with i < j only, or both orders
    when they are antisymmetric. dξᵏ = −Σ_{i<j} cᵏᵢⱼ ξⁱ∧ξʲ.
    """
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for (i, j), values in brackets.items():
        for k, value in values.items():
            value = Fraction(value)
            if i == j and value:
                raise JacobiError(f"[e{i + 1}, e{i + 1}] must vanish")
            if i == j:
                continue
            if (j, i) in brackets and Fraction(brackets[(j, i)].get(k, 0)) != -value:
                raise JacobiError(f"structure constants are not antisymmetric at ({i + 1}, {j + 1})")
            c[i][j][k] = value
            c[j][i][k] = -value

    def br(x: Sequence[Fraction], y: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        return tuple(
            sum((x[i] * y[j] * c[i][j][k] for i in range(n) for j in range(n) if x[i] and y[j]), Fraction(0))
            for k in range(n)
        )

    unit = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    for i, j, l in combinations(range(n), 3):
        total = [sum(t) for t in zip(br(br(unit[i], unit[j]), unit[l]), br(br(unit[j], unit[l]), unit[i]), br(br(unit[l], unit[i]), unit[j]))]
        if any(total):
            raise JacobiError(f"Jacobi identity fails on (e{i + 1}, e{j + 1}, e{l + 1})")

    series = unit
    for _ in range(n + 1):
        spanned = [br(x, y) for x in unit for y in series]
        series, _ = linalg.rref([v for v in spanned if any(v)], n)
        if not series:
            break
    if series:
        raise NotNilpotentError("lower central series does not terminate")

    names = list(names) if names is not None else [f"e{i + 1}" for i in range(n)]
    bidegrees = list(bidegrees) if bidegrees is not None else [(1, 0)] * n
    gens = [Generator(name, p, q) for name, (p, q) in zip(names, bidegrees)]
    differential = {k: {(i, j): -c[i][j][k] for i, j in combinations(range(n), 2) if c[i][j][k]} for k in range(n)}
    algebra = CEAlgebra(gens, differential)
    logger.debug("ce algebra built", n=n, nonzero=sum(1 for v in algebra.differential.values() if v))
    return algebra


def iwasawa_algebra(sign: int = 1) -> CEAlgebra:
    """α, β, γ of type (1,0) and conjugates of type (0,1) with dγ = ±α∧β, dγ̄ = ±ᾱ∧β̄"""
    gens = [
        ("alpha", 1, 0),
        ("beta", 1, 0),
        ("gamma", 1, 0),
        ("alpha_bar", 0, 1),
        ("beta_bar", 0, 1),
        ("gamma_bar", 0, 1),
    ]
    return CEAlgebra.from_presentation(
        gens,
        {"gamma": [(sign, "alpha", "beta")], "gamma_bar": [(sign, "alpha_bar", "beta_bar")]},
    )


def real_iwasawa_structure_constants() -> Dict[Tuple[int, int], Dict[int, Fraction]]:
    """Real form of the complex Heisenberg bracket [X, Y] = Z with X = e₁+ie₂, Y = e₃+ie₄, Z = e₅+ie₆"""
    one = Fraction(1)
    return {(0, 2): {4: one}, (0, 3): {5: one}, (1, 2): {5: one}, (1, 3): {4: -one}}


def abelian_algebra(n: int, holomorphic: Optional[int] = None) -> CEAlgebra:
    """d = 0 on n generators; the first ``holomorphic`` (default n // 2) are of type (1,0)"""
    holomorphic = n // 2 if holomorphic is None else holomorphic
    gens = [Generator(f"x{i + 1}", int(i < holomorphic), int(i >= holomorphic)) for i in range(n)]
    return CEAlgebra(gens, {})


def heisenberg3_algebra() -> CEAlgebra:
    return ce_from_nilpotent_algebra({(0, 1): {2: Fraction(1)}}, 3)


IWASAWA_NAMES = ("alpha", "beta", "gamma", "alpha_bar", "beta_bar", "gamma_bar")


@dataclass(frozen=True)
class DistinguishedForms:
    """ω = (α∧ᾱ + β∧β̄)∧γ∧γ̄, τ = α∧β∧ᾱ∧β̄ and the candidate primitive γ∧ᾱ∧β̄"""

    omega: "DGElement"
    tau: "DGElement"
    tau_primitive: "DGElement"


def distinguished_forms(algebra: CEAlgebra) -> DistinguishedForms:
    missing = [name for name in IWASAWA_NAMES if not algebra.has_generator(name)]
    if missing:
        raise KeyError(f"generators {missing} are not present")
    m = algebra.monomial
    omega = (m("alpha", "alpha_bar") + m("beta", "beta_bar")) ^ m("gamma", "gamma_bar")
    return DistinguishedForms(omega, m("alpha", "beta", "alpha_bar", "beta_bar"), m("gamma", "alpha_bar", "beta_bar"))


# -------------------------------------------------------------- cohomology


def betti_numbers(algebra: CEAlgebra) -> List[int]:
    ranks = [algebra.d_rank(k) for k in range(algebra.n + 1)]
    return [algebra.dim(k) - ranks[k] - (ranks[k - 1] if k else 0) for k in range(algebra.n + 1)]


def euler_characteristic(betti: Sequence[int]) -> int:
    return sum((-1) ** k * b for k, b in enumerate(betti))


def poincare_duality_holds(betti: Sequence[int]) -> bool:
    return list(betti) == list(reversed(betti))


def is_closed(x: DGElement) -> bool:
    return x.d().is_zero()


def is_exact(x: DGElement) -> Optional[DGElement]:
    """A primitive y with dy = x, or None"""
    algebra, k = x.algebra, x.degree
    if k == 0:
        return None if not x.is_zero() else algebra.zero(0)
    matrix = algebra.d_matrix(k - 1)
    solution = linalg.solve(matrix, list(x.vector()), algebra.dim(k - 1))
    if solution is None:
        return None
    return DGElement.from_vector(algebra, k - 1, solution)


# ---------------------------------------------------------------- Frölicher


def _filtered(algebra: CEAlgebra, k: int, p: int) -> List[int]:
    """Positions of degree-k monomials with first degree ≥ p"""
    return [i for i, m in enumerate(algebra.basis(k)) if algebra.bidegree_of(m)[0] >= p]


def _z(algebra: CEAlgebra, k: int, p: int, r: int, d_k: List[Tuple[Fraction, ...]]) -> List[Tuple[Fraction, ...]]:
    """Basis of Z_r^p in degree k: x ∈ F^p with dx ∈ F^{p+r}"""
    cols = _filtered(algebra, k, p)
    if not cols:
        return []
    high = set(_filtered(algebra, k + 1, p + r))
    constraint = [tuple(row[c] for c in cols) for i, row in enumerate(d_k) if i not in high]
    dim = algebra.dim(k)
    out = []
    for v in linalg.nullspace(constraint, len(cols)):
        full = [Fraction(0)] * dim
        for c, x in zip(cols, v):
            full[c] = x
        out.append(tuple(full))
    return out


@dataclass(frozen=True)
class FrolicherPages:
    """Dimensions E_r^{p,q} for r = 1..rmax, with de Rham data for comparison"""

    pages: Dict[int, Dict[Bidegree, int]]
    betti: Tuple[int, ...]

    def total(self, r: int) -> int:
        return sum(self.pages[r].values())

    def degree_totals(self, r: int) -> List[int]:
        n = len(self.betti) - 1
        return [sum(v for (p, q), v in self.pages[r].items() if p + q == k) for k in range(n + 1)]

    def degenerates_at(self) -> Optional[int]:
        """First page whose totals per degree equal the Betti numbers"""
        for r in sorted(self.pages):
            if self.degree_totals(r) == list(self.betti):
                return r
        return None

    def to_dict(self) -> dict:
        return {
            "betti": list(self.betti),
            "pages": {
                str(r): {f"{p},{q}": v for (p, q), v in sorted(table.items())} for r, table in sorted(self.pages.items())
            },
            "totals": {str(r): self.total(r) for r in sorted(self.pages)},
            "degenerates_at": self.degenerates_at(),
        }


def frolicher_pages(algebra: CEAlgebra, rmax: int) -> FrolicherPages:
    """
    E_r^{p,q} = Z_r^p / (Z_{r−1}^{p+1} + d·Z_{r−1}^{p−r+1}) in total degree p+q.
    """
    if rmax < 1:
        raise ValueError("rmax must be at least 1")
    algebra.check_bigraded()
    n = algebra.n
    d = {k: algebra.d_matrix(k) for k in range(n + 1)}
    pages: Dict[int, Dict[Bidegree, int]] = {}
    for r in range(1, rmax + 1):
        table: Dict[Bidegree, int] = {}
        for k in range(n + 1):
            for p in range(k + 1):
                z = _z(algebra, k, p, r, d[k])
                if not z:
                    table[(p, k - p)] = 0
                    continue
                lower = list(_z(algebra, k, p + 1, r - 1, d[k]))
                if k > 0:
                    for y in _z(algebra, k - 1, p - r + 1, r - 1, d[k - 1]):
                        lower.append(linalg.mat_vec(d[k - 1], y))
                table[(p, k - p)] = len(z) - linalg.rank(lower, algebra.dim(k))
        pages[r] = table
        logger.debug("frolicher page", r=r, total=sum(table.values()))
    return FrolicherPages(pages, tuple(betti_numbers(algebra)))


def dolbeault_numbers(algebra: CEAlgebra) -> Dict[Bidegree, int]:
    """The first page as a bigraded table"""
    return frolicher_pages(algebra, 1).pages[1]
