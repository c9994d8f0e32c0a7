from iwasawa_lab.services.errors import FieldMismatchError
from iwasawa_lab.services.heisenberg import HeisLattice
from iwasawa_lab.services.tori_hodge import (
    cm_field,
    enumerate_elliptic_subtori,
    line_lattice_in_k,
    picard_number,
    torus_from_klattice,
)
from iwasawa_lab.tools.base import CheckOutcome, verification_check


@verification_check(
    "subtorus-cm",
    "every holomorphic subtorus carries the complex multiplication of the base",
    "elliptic subtori of a CM surface E × E share the CM field of E, and B × E has maximal Picard number",
)
def handle_subtorus_cm(lattice: HeisLattice, height: int = 2) -> CheckOutcome:
    """Each elliptic subtorus B of the base shares the fiber's CM field and B × E has ρ = 4"""
    quad = lattice.field
    fiber = lattice.fiber_curve()
    fiber_field = cm_field(fiber)
    results = []
    failures = []
    for sub in enumerate_elliptic_subtori(lattice.base_torus(), height):
        curve = torus_from_klattice(line_lattice_in_k(sub.lattice, quad), quad)
        field = cm_field(curve)
        try:
            rho = picard_number(curve.product(fiber))
        except FieldMismatchError:
            rho = None
        entry = {
            "line": [str(z) for z in sub.representative],
            "height": sub.height,
            "field": field.label if field else None,
            "product_rho": rho,
        }
        results.append(entry)
        if field is None or field != fiber_field or rho != 4:
            failures.append(entry)
    witnesses = {
        "expected_field": quad.label,
        "fiber_field": fiber_field.label if fiber_field else None,
        "height": height,
        "subtori": results,
    }
    passed = fiber_field == quad and not failures
    if failures:
        witnesses["counterexample"] = failures[0]
    return passed, witnesses
