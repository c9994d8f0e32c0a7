from typing import Any, Dict

from iwasawa_lab.services.heisenberg import HeisLattice
from iwasawa_lab.services.tori_hodge import TorusJ, cm_field, decompose_isogeny, endomorphism_order
from iwasawa_lab.tools.base import CheckOutcome, verification_check


def describe_curve(curve: TorusJ) -> Dict[str, Any]:
    """CM field of a curve, with the conductor of its order when the lattice is known"""
    field = cm_field(curve)
    out: Dict[str, Any] = {"cm": field is not None, "field": field.label if field else None}
    if field is not None and curve.is_klattice_backed():
        out["conductor"] = endomorphism_order(curve).conductor
    return out


@verification_check(
    "shared-cm",
    "fiber and both isogeny factors carry the same complex multiplication",
    "the fiber curve and the isogeny factors of the base all have CM by the field of the lattice",
)
def handle_shared_cm(lattice: HeisLattice) -> CheckOutcome:
    quad = lattice.field
    decomposition = decompose_isogeny(lattice.base_torus())
    first, second = decomposition.curves(quad)
    curves = {"fiber": lattice.fiber_curve(), "first_factor": first, "second_factor": second}
    described = {name: describe_curve(curve) for name, curve in curves.items()}
    passed = all(info["field"] == quad.label for info in described.values())
    witnesses = {
        "expected_field": quad.label,
        "curves": described,
        "isogeny_degree": decomposition.degree,
    }
    return passed, witnesses
