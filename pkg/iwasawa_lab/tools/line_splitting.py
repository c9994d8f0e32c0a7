from typing import Any, Dict, List, Optional, Sequence, Tuple

from iwasawa_lab.services.chern import chern_form, restrict_to_subtorus, verify_holomorphic_type
from iwasawa_lab.services.exact_fields import QuadElem
from iwasawa_lab.services.heisenberg import HeisLattice, extract_iwasawa, split_over_line
from iwasawa_lab.services.tori_hodge import enumerate_elliptic_subtori, line_height, line_lattice
from iwasawa_lab.services.zlattice import ZLattice
from iwasawa_lab.tools.base import CheckOutcome, verification_check

Line = Tuple[QuadElem, QuadElem]


def _explicit_lines(lattice: HeisLattice, lines: Sequence[Line]) -> List[Tuple[Line, Optional[int], ZLattice]]:
    out = []
    for v in lines:
        height = 1 if v[0].is_zero() else line_height(v[1] / v[0])
        out.append((tuple(v), height, line_lattice(lattice.delta, lattice.field, v)))
    return out


@verification_check(
    "line-splitting",
    "the bundle splits over every complex line of the base",
    "restricted to a complex line through the origin the Heisenberg extension becomes abelian and splits",
)
def handle_line_splitting(
    lattice: HeisLattice, height: int = 2, lines: Optional[Sequence[Line]] = None
) -> CheckOutcome:
    """
    For every K-line of the base up to the height bound (or the given lines): q is of
    type (2,0), vanishes on the line, and the lifted line commutes with itself, so
    π⁻¹ of the subtorus is the split 2-torus (line lattice) × (fiber).
    """
    data = extract_iwasawa(lattice)
    form = chern_form(data)
    if lines is not None:
        for v in lines:
            split_over_line(data, v)
        targets = _explicit_lines(lattice, lines)
    else:
        targets = [(s.representative, s.height, s.lattice) for s in enumerate_elliptic_subtori(lattice.base_torus(), height)]

    certificate = verify_holomorphic_type(form)
    witnesses: Dict[str, Any] = {"d": data.field.d, "height": height if lines is None else None}
    witnesses["holomorphic_type"] = certificate.to_dict()
    if not certificate.passed:
        return False, witnesses

    results = []
    failures = []
    for rep, h, sub in targets:
        restricted = restrict_to_subtorus(form, sub)
        split = split_over_line(data, rep)
        entry = {
            "line": [str(z) for z in rep],
            "height": h,
            "restriction_zero": restricted.is_zero,
            "brackets_zero": split.holds,
            "split_torus": {"line_lattice": sub.to_dict(), "fiber": data.gamma.to_dict()},
        }
        results.append(entry)
        if not (restricted.is_zero and split.holds):
            failures.append({**entry, "restriction": restricted.to_dict(), "certificate": split.to_dict()})
    witnesses["lines"] = len(results)
    witnesses["results"] = results
    if failures:
        witnesses["counterexample"] = failures[0]
    return not failures, witnesses
