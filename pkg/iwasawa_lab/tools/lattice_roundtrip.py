from iwasawa_lab.services.exact_fields import QuadField
from iwasawa_lab.services.heisenberg import (
    check_cocycle_condition,
    construct_iwasawa,
    extract_iwasawa,
    gram_matrix,
    q_generates_gamma,
    word_oracle,
)
from iwasawa_lab.services.zlattice import ZLattice
from iwasawa_lab.tools.base import CheckOutcome, verification_check


@verification_check(
    "lattice-roundtrip",
    "lattice data with q(Λ²Δ) ⊂ Γ builds a cocompact lattice and round-trips",
    "classification of lattices in the complex Heisenberg group by (Δ, Γ, q) with q(Λ²Δ) ⊂ Γ",
)
def handle_lattice_roundtrip(delta: ZLattice, gamma: ZLattice, quad: QuadField, oracle_length: int = 0) -> CheckOutcome:
    """
    Build the lattice from (Δ, Γ), extract (Δ, Γ, q) again and compare. A violated
    cocycle condition is a failure whose witness is the offending basis pair.

    With oracle_length > 0 the central elements among short words in the
    generators must also lie in Γ.
    """
    witnesses = {"d": quad.d, "delta": delta.to_dict(), "gamma": gamma.to_dict()}
    violation = check_cocycle_condition(delta, gamma, quad)
    if violation is not None:
        witnesses["violation"] = {
            "pair": [[str(z) for z in v] for v in violation.pair],
            "value": str(violation.value),
            "indices": list(violation.indices),
        }
        return False, witnesses

    lattice = construct_iwasawa(delta, gamma, quad)
    data = extract_iwasawa(lattice)
    comparison = {
        "delta": data.delta == delta,
        "gamma": data.gamma == gamma,
        "q": data.q == gram_matrix(quad, delta),
    }
    witnesses["round_trip"] = comparison
    witnesses["q_spans_center"] = q_generates_gamma(data)
    passed = all(comparison.values())
    if oracle_length > 0:
        oracle = word_oracle(lattice.generators, oracle_length)
        agrees = data.gamma.contains_lattice(oracle.central)
        witnesses["word_oracle"] = {
            "max_length": oracle_length,
            "elements": len(oracle.elements),
            "central": oracle.central.to_dict(),
            "inside_gamma": agrees,
        }
        passed = passed and agrees
    return passed, witnesses
