"""
Exact Fields

Arithmetic for ℚ (``fractions.Fraction``), imaginary quadratic fields
K = ℚ(√−d) and real algebraic fields F = ℚ(θ) given by a monic irreducible
minimal polynomial and an isolating interval for the real root θ.

K is embedded in ℂ with Im σ(√−d) > 0; an element a + b√−d is read as the
rational pair (a, b) whenever K has to be viewed as ℚ².
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Sequence, Tuple, Union

import structlog
from sympy import Poly, Rational, Symbol, factorint, resultant

from iwasawa_lab.services.errors import (
    DivisionByZeroError,
    FieldMismatchError,
    InvalidFieldError,
)

logger = structlog.get_logger(__name__)

RationalLike = Union[int, Fraction]

_T = Symbol("t")


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints and Fractions; anything else (floats included) is rejected"""
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise TypeError(f"expected an exact rational, got {type(value).__name__}")
    return Fraction(value)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------- quadratic


@dataclass(frozen=True)
class QuadField:
    """The imaginary quadratic field ℚ(√−d), d ≥ 1 squarefree"""

    d: int

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, int):
            raise InvalidFieldError(f"d must be an integer, got {self.d!r}")
        if self.d < 1:
            raise InvalidFieldError(f"d must be positive, got {self.d}")
        if any(e > 1 for e in factorint(self.d).values()):
            raise InvalidFieldError(f"d = {self.d} is not squarefree")

    def __call__(self, a: RationalLike = 0, b: RationalLike = 0) -> "QuadElem":
        return QuadElem(self, as_rational(a), as_rational(b))

    @property
    def zero(self) -> "QuadElem":
        return self(0, 0)

    @property
    def one(self) -> "QuadElem":
        return self(1, 0)

    @property
    def sqrt_neg_d(self) -> "QuadElem":
        return self(0, 1)

    @property
    def label(self) -> str:
        return f"Q(sqrt(-{self.d}))"

    def integer_basis(self) -> Tuple["QuadElem", "QuadElem"]:
        """ℤ-basis (1, ω) of the ring of integers"""
        if self.d % 4 == 3:
            return self.one, self(Fraction(1, 2), Fraction(1, 2))
        return self.one, self.sqrt_neg_d

    def units(self) -> List["QuadElem"]:
        """The finite unit group of the ring of integers"""
        if self.d == 1:
            return [self(1), self(-1), self(0, 1), self(0, -1)]
        if self.d == 3:
            half = Fraction(1, 2)
            return [self(1), self(-1), self(half, half), self(-half, -half), self(-half, half), self(half, -half)]
        return [self(1), self(-1)]

    def multiplication_matrix(self) -> Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]:
        """Matrix of x ↦ √−d·x acting on columns (a, b)"""
        return ((Fraction(0), Fraction(-self.d)), (Fraction(1), Fraction(0)))

    def from_pair(self, pair: Sequence[RationalLike]) -> "QuadElem":
        a, b = pair
        return self(a, b)

    def flatten(self, vector: Sequence["QuadElem"]) -> Tuple[Fraction, ...]:
        """K^g → ℚ^{2g}: (z₁, …, z_g) ↦ (a₁, b₁, …, a_g, b_g)"""
        out: List[Fraction] = []
        for z in vector:
            if z.field != self:
                raise FieldMismatchError(f"{z.field.label} vs {self.label}")
            out.extend((z.a, z.b))
        return tuple(out)

    def unflatten(self, coords: Sequence[RationalLike]) -> Tuple["QuadElem", ...]:
        if len(coords) % 2:
            raise ValueError("a K-vector needs an even number of rational coordinates")
        return tuple(self(coords[i], coords[i + 1]) for i in range(0, len(coords), 2))

    def mu_matrix(self, g: int) -> Tuple[Tuple[Fraction, ...], ...]:
        """Block-diagonal matrix of multiplication by √−d on K^g read as ℚ^{2g}"""
        (m00, m01), (m10, m11) = self.multiplication_matrix()
        rows = []
        for k in range(g):
            top = [Fraction(0)] * (2 * g)
            bottom = [Fraction(0)] * (2 * g)
            top[2 * k], top[2 * k + 1] = m00, m01
            bottom[2 * k], bottom[2 * k + 1] = m10, m11
            rows.extend((tuple(top), tuple(bottom)))
        return tuple(rows)


@dataclass(frozen=True)
class QuadElem:
    """a + b√−d"""

    field: QuadField
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))

    def _coerce(self, other) -> Optional["QuadElem"]:
        if isinstance(other, QuadElem):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field.label} vs {other.field.label}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadElem(self.field, Fraction(other), Fraction(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.field, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.field.d
        return QuadElem(self.field, self.a * o.a - d * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def conj(self) -> "QuadElem":
        return QuadElem(self.field, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a + self.field.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise DivisionByZeroError("inverse of zero in " + self.field.label)
        c = self.conj()
        return QuadElem(self.field, c.a / n, c.b / n)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def pair(self) -> Tuple[Fraction, Fraction]:
        return (self.a, self.b)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        root = f"sqrt(-{self.field.d})"
        if self.a == 0:
            return f"{self.b}*{root}"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*{root}"


# -------------------------------------------------------------- real fields


def _to_sympy(x: Fraction) -> Rational:
    return Rational(x.numerator, x.denominator)


def _from_sympy(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def _poly(coeffs_low_to_high: Sequence[Fraction]) -> Poly:
    return Poly([_to_sympy(c) for c in reversed(coeffs_low_to_high)] or [0], _T, domain="QQ")


def _horner(coeffs_low_to_high: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs_low_to_high):
        acc = acc * x + c
    return acc


def _interval_horner(coeffs_low_to_high: Sequence[Fraction], lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    """Enclosure of the polynomial's range over [lo, hi]"""
    low = high = Fraction(0)
    for c in reversed(coeffs_low_to_high):
        products = (low * lo, low * hi, high * lo, high * hi)
        low, high = min(products) + c, max(products) + c
    return low, high


@dataclass(frozen=True)
class RealAlgField:
    """
    ℚ(θ) with θ the unique real root of ``minpoly`` inside ``interval``.

    ``minpoly`` lists coefficients from the constant term upward and must be
    monic and irreducible over ℚ.
    """

    minpoly: Tuple[Fraction, ...]
    interval: Tuple[Fraction, Fraction]

    def __post_init__(self):
        coeffs = tuple(as_rational(c) for c in self.minpoly)
        lo, hi = (as_rational(v) for v in self.interval)
        object.__setattr__(self, "minpoly", coeffs)
        object.__setattr__(self, "interval", (lo, hi))
        if len(coeffs) < 2:
            raise InvalidFieldError("minimal polynomial must have degree at least 1")
        if coeffs[-1] != 1:
            raise InvalidFieldError("minimal polynomial must be monic")
        if not lo < hi:
            raise InvalidFieldError(f"empty isolating interval [{lo}, {hi}]")
        poly = _poly(coeffs)
        if len(coeffs) > 2 and not poly.is_irreducible:
            raise InvalidFieldError(f"{poly.as_expr()} is reducible over Q")
        f_lo, f_hi = _horner(coeffs, lo), _horner(coeffs, hi)
        if f_lo == 0 or f_hi == 0 or _sign(f_lo) == _sign(f_hi):
            raise InvalidFieldError(f"no sign change of the minimal polynomial on [{lo}, {hi}]")
        if poly.count_roots(_to_sympy(lo), _to_sympy(hi)) != 1:
            raise InvalidFieldError(f"[{lo}, {hi}] does not isolate a single real root")

    @classmethod
    def rational(cls) -> "RealAlgField":
        """ℚ itself, presented as ℚ(θ) with θ = 0"""
        return cls((Fraction(0), Fraction(1)), (Fraction(-1), Fraction(1)))

    @classmethod
    def sqrt(cls, d: int) -> "RealAlgField":
        """ℚ(√d); collapses to ℚ when d is a perfect square"""
        r = math.isqrt(d)
        if r * r == d:
            return cls.rational()
        return cls((Fraction(-d), Fraction(0), Fraction(1)), (Fraction(r), Fraction(r + 1)))

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @cached_property
    def poly(self) -> Poly:
        return _poly(self.minpoly)

    def is_rational_field(self) -> bool:
        return self.degree == 1

    def __call__(self, *coeffs: RationalLike) -> "RealAlgElem":
        return self.element(coeffs)

    def element(self, coeffs: Sequence[RationalLike]) -> "RealAlgElem":
        coeffs = [as_rational(c) for c in coeffs]
        if len(coeffs) > self.degree:
            return RealAlgElem.from_poly(self, _poly(coeffs))
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        return RealAlgElem(self, tuple(coeffs))

    def from_rational(self, x: RationalLike) -> "RealAlgElem":
        return self.element([x])

    @property
    def zero(self) -> "RealAlgElem":
        return self.from_rational(0)

    @property
    def one(self) -> "RealAlgElem":
        return self.from_rational(1)

    def theta(self) -> "RealAlgElem":
        """The generator θ (for ℚ presented as ℚ(θ) this is the rational root itself)"""
        if self.degree == 1:
            return self.from_rational(-self.minpoly[0])
        return self.element([0, 1])

    def refine(self, lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
        """One bisection step of an isolating interval for θ"""
        mid = (lo + hi) / 2
        f_mid = _horner(self.minpoly, mid)
        if f_mid == 0:
            return mid, mid
        if _sign(f_mid) == _sign(_horner(self.minpoly, lo)):
            return mid, hi
        return lo, mid


@dataclass(frozen=True)
class RealAlgElem:
    """Σ cᵢθⁱ, reduced modulo the minimal polynomial"""

    field: RealAlgField
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(as_rational(c) for c in self.coeffs)
        if len(coeffs) != self.field.degree:
            raise ValueError(f"expected {self.field.degree} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_poly(cls, fld: RealAlgField, poly: Poly) -> "RealAlgElem":
        reduced = poly.rem(fld.poly)
        high_to_low = [_from_sympy(c) for c in reduced.all_coeffs()]
        coeffs = list(reversed(high_to_low))
        coeffs += [Fraction(0)] * (fld.degree - len(coeffs))
        return cls(fld, tuple(coeffs[: fld.degree]))

    def _coerce(self, other) -> Optional["RealAlgElem"]:
        if isinstance(other, RealAlgElem):
            if other.field != self.field:
                raise FieldMismatchError("operands live in different real algebraic fields")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field.from_rational(other)
        return None

    @property
    def _as_poly(self) -> Poly:
        return _poly(self.coeffs)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RealAlgElem(self.field, tuple(x + y for x, y in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return RealAlgElem(self.field, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RealAlgElem(self.field, tuple(x - y for x, y in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.field.degree == 1:
            return RealAlgElem(self.field, (self.coeffs[0] * o.coeffs[0],))
        return RealAlgElem.from_poly(self.field, self._as_poly * o._as_poly)

    __rmul__ = __mul__

    def inverse(self) -> "RealAlgElem":
        if self.is_zero():
            raise DivisionByZeroError("inverse of zero in a real algebraic field")
        if self.field.degree == 1:
            return RealAlgElem(self.field, (1 / self.coeffs[0],))
        return RealAlgElem.from_poly(self.field, self._as_poly.invert(self.field.poly))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def conj(self) -> "RealAlgElem":
        # θ is real, so complex conjugation fixes every element
        return self

    def norm(self) -> Fraction:
        """Field norm N_{F/ℚ}, the product of all conjugates"""
        if self.field.degree == 1:
            return self.coeffs[0]
        return _from_sympy(resultant(self.field.poly.as_expr(), self._as_poly.as_expr(), _T))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(str(c) if i == 0 else f"{c}*t^{i}" if i > 1 else f"{c}*t")
        return " + ".join(terms) or "0"


# ------------------------------------------------------------- operations

FieldElem = Union[QuadElem, RealAlgElem]

_OPS = ("add", "sub", "mul", "div", "conj", "norm")


def field_arith(x: FieldElem, y: Optional[FieldElem], op: str) -> Union[FieldElem, Fraction]:
    """
    Dispatch one exact field operation by name.

    ``conj`` and ``norm`` are unary and ignore ``y``.
    """
    if op not in _OPS:
        raise ValueError(f"unknown field operation {op!r}")
    if op == "conj":
        return x.conj()
    if op == "norm":
        return x.norm()
    if y is None:
        raise ValueError(f"{op} needs two operands")
    if type(x) is not type(y) or x.field != y.field:
        raise FieldMismatchError(f"cannot {op} elements of different fields")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    return x / y


def sign_of(x: RealAlgElem) -> int:
    """
    Exact sign of the real number Σ cᵢθⁱ.

    A nonzero reduced element cannot vanish at θ, so bisecting the isolating
    interval eventually separates its range from zero.
    """
    if x.is_zero():
        return 0
    coeffs = x.coeffs
    if x.field.degree == 1:
        return _sign(coeffs[0])
    lo, hi = x.field.interval
    steps = 0
    while True:
        low, high = _interval_horner(coeffs, lo, hi)
        if low > 0:
            logger.debug("sign decided", sign=1, bisections=steps)
            return 1
        if high < 0:
            logger.debug("sign decided", sign=-1, bisections=steps)
            return -1
        lo, hi = x.field.refine(lo, hi)
        if lo == hi:
            return _sign(_horner(coeffs, lo))
        steps += 1


def compare(x: RealAlgElem, y: RealAlgElem) -> int:
    return sign_of(x - y)


@dataclass(frozen=True)
class LinearSystem:
    """Rows of coefficients with right-hand sides: rows[i] · x = rhs[i]"""

    rows: Tuple[Tuple[Fraction, ...], ...]
    rhs: Tuple[Fraction, ...]

    @property
    def unknowns(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def is_satisfied_by(self, x: Sequence[Fraction]) -> bool:
        return all(sum((c * v for c, v in zip(row, x)), Fraction(0)) == b for row, b in zip(self.rows, self.rhs))


def scalarize(
    rows: Sequence[Sequence[Union[RealAlgElem, RationalLike]]],
    rhs: Optional[Sequence[Union[RealAlgElem, RationalLike]]] = None,
    fld: Optional[RealAlgField] = None,
) -> LinearSystem:
    """
    Reduce a linear system with coefficients in F = ℚ(θ) and rational unknowns
    to a ℚ-linear system by expanding each equation in the power basis.

    The returned system stacks the θ⁰-components of all equations, then the
    θ¹-components, and so on; identically zero equations are dropped when F ≠ ℚ.
    """
    rhs = list(rhs) if rhs is not None else [0] * len(rows)
    if len(rhs) != len(rows):
        raise ValueError("right-hand side length does not match the number of equations")
    fields = {c.field for row in rows for c in row if isinstance(c, RealAlgElem)}
    fields |= {c.field for c in rhs if isinstance(c, RealAlgElem)}
    if fld is not None:
        fields.add(fld)
    if len(fields) > 1:
        raise FieldMismatchError("system mixes coefficients from different fields")
    fld = fields.pop() if fields else RealAlgField.rational()

    def lift(c) -> RealAlgElem:
        return c if isinstance(c, RealAlgElem) else fld.from_rational(c)

    lifted = [[lift(c) for c in row] for row in rows]
    lifted_rhs = [lift(b) for b in rhs]
    if fld.degree == 1:
        return LinearSystem(
            tuple(tuple(c.coeffs[0] for c in row) for row in lifted),
            tuple(b.coeffs[0] for b in lifted_rhs),
        )
    out_rows, out_rhs = [], []
    for k in range(fld.degree):
        for row, b in zip(lifted, lifted_rhs):
            component = tuple(c.coeffs[k] for c in row)
            if any(component) or b.coeffs[k] != 0:
                out_rows.append(component)
                out_rhs.append(b.coeffs[k])
    logger.debug("system scalarized", degree=fld.degree, equations=len(rows), rational_equations=len(out_rows))
    return LinearSystem(tuple(out_rows), tuple(out_rhs))
