from .errors import (
    CocycleConditionViolated,
    DifferentialError,
    DimensionMismatchError,
    DivisionByZeroError,
    FieldMismatchError,
    InputDocumentError,
    InvalidFieldError,
    IwasawaLabError,
    JacobiError,
    NotCocompactError,
    NotComplexLineError,
    NotKLatticeError,
    NotNilpotentError,
    NotSublatticeError,
    RankError,
    ZeroVectorError,
)
from .exact_fields import QuadElem, QuadField, RealAlgElem, RealAlgField, field_arith, scalarize, sign_of
from .zlattice import (
    INFINITE,
    QSubspace,
    ZLattice,
    index_in,
    intersect,
    lattice_from_generators,
    member,
    saturate,
    smith_normal_form,
    stable_under,
)
from .heisenberg import (
    HeisLattice,
    HeisPoint,
    IwasawaData,
    LieVector,
    bch,
    construct_iwasawa,
    extract_iwasawa,
    heis_exp,
    heis_inv,
    heis_log,
    heis_mul,
    primitive_in_delta,
    split_over_line,
    validate_lattice,
)
from .tori_hodge import (
    CMOrder,
    EndAlgebra,
    TorusJ,
    cm_report,
    decompose_isogeny,
    endomorphism_algebra,
    endomorphism_order,
    enumerate_elliptic_subtori,
    h20_02_dim,
    picard_number,
    torus_from_klattice,
)
from .ce_cohomology import (
    CEAlgebra,
    DGElement,
    betti_numbers,
    ce_from_nilpotent_algebra,
    frolicher_pages,
    is_closed,
    is_exact,
)
from .chern import CocycleForm, chern_form, restrict_to_subtorus, verify_holomorphic_type

__all__ = [
    "IwasawaLabError",
    "InvalidFieldError",
    "FieldMismatchError",
    "DivisionByZeroError",
    "DimensionMismatchError",
    "NotSublatticeError",
    "RankError",
    "NotCocompactError",
    "CocycleConditionViolated",
    "NotKLatticeError",
    "NotComplexLineError",
    "ZeroVectorError",
    "DifferentialError",
    "JacobiError",
    "NotNilpotentError",
    "InputDocumentError",
    "QuadField",
    "QuadElem",
    "RealAlgField",
    "RealAlgElem",
    "field_arith",
    "scalarize",
    "sign_of",
    "INFINITE",
    "ZLattice",
    "QSubspace",
    "lattice_from_generators",
    "smith_normal_form",
    "intersect",
    "saturate",
    "index_in",
    "member",
    "stable_under",
    "HeisPoint",
    "LieVector",
    "HeisLattice",
    "IwasawaData",
    "heis_mul",
    "heis_inv",
    "heis_log",
    "heis_exp",
    "bch",
    "validate_lattice",
    "extract_iwasawa",
    "construct_iwasawa",
    "primitive_in_delta",
    "split_over_line",
    "TorusJ",
    "EndAlgebra",
    "CMOrder",
    "torus_from_klattice",
    "endomorphism_algebra",
    "endomorphism_order",
    "picard_number",
    "h20_02_dim",
    "cm_report",
    "enumerate_elliptic_subtori",
    "decompose_isogeny",
    "CEAlgebra",
    "DGElement",
    "ce_from_nilpotent_algebra",
    "betti_numbers",
    "frolicher_pages",
    "is_closed",
    "is_exact",
    "CocycleForm",
    "chern_form",
    "verify_holomorphic_type",
    "restrict_to_subtorus",
]
