"""
Error hierarchy

Every failure raised by the engines derives from ``IwasawaLabError`` so that
callers (the CLI, the verification tools) can tell mathematical preconditions
apart from programming errors.
"""

from typing import Any, Optional, Tuple


class IwasawaLabError(Exception):
    """Root of all iwasawa-lab errors"""
    pass


class InvalidFieldError(IwasawaLabError, ValueError):
    """Raised when a field descriptor is rejected (non-squarefree d, reducible minpoly, bad interval)"""
    pass


class FieldMismatchError(IwasawaLabError, ValueError):
    """Raised when two operands live in different fields"""
    pass


class DivisionByZeroError(IwasawaLabError, ZeroDivisionError):
    """Raised on exact division by zero"""
    pass


class DimensionMismatchError(IwasawaLabError, ValueError):
    """Raised when vectors, matrices or lattices have incompatible dimensions"""
    pass


class NotSublatticeError(IwasawaLabError, ValueError):
    """Raised when a lattice is expected to be contained in another one and is not"""
    pass


class RankError(IwasawaLabError, ValueError):
    """Raised when a lattice does not have the rank an operation needs"""
    pass


class NotCocompactError(IwasawaLabError):
    """Raised when a generated subgroup of the Heisenberg group is not a cocompact lattice"""

    def __init__(self, which: str, rank: int, expected: int):
        self.which = which
        self.rank = rank
        self.expected = expected
        super().__init__(f"not cocompact: rank({which}) = {rank}, expected {expected}")


class CocycleConditionViolated(IwasawaLabError):
    """Raised when q(δᵢ, δⱼ) leaves Γ for a pair of basis vectors"""

    def __init__(self, pair: Tuple[Any, Any], value: Any, indices: Optional[Tuple[int, int]] = None):
        self.pair = pair
        self.value = value
        self.indices = indices
        super().__init__(f"cocycle condition violated: q{pair} = {value} is not in Gamma")


class NotKLatticeError(IwasawaLabError, ValueError):
    """Raised when an operation needs a torus backed by a lattice in K^g"""
    pass


class NotComplexLineError(IwasawaLabError, ValueError):
    """Raised when a rank-2 lattice does not span a K-line"""
    pass


class ZeroVectorError(IwasawaLabError, ValueError):
    """Raised when a line is requested through the zero vector"""
    pass


class DifferentialError(IwasawaLabError, ValueError):
    """Raised when a differential squares to a nonzero map or has the wrong bidegree"""
    pass


class JacobiError(IwasawaLabError, ValueError):
    """Raised when structure constants are not antisymmetric or violate the Jacobi identity"""
    pass


class NotNilpotentError(IwasawaLabError, ValueError):
    """Raised when structure constants do not define a nilpotent Lie algebra"""
    pass


class InputDocumentError(IwasawaLabError):
    """Raised when an input document cannot be read or fails its schema"""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
