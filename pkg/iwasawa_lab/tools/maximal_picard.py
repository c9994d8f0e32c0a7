from iwasawa_lab.services.heisenberg import HeisLattice
from iwasawa_lab.services.tori_hodge import h20_02_dim, picard_number
from iwasawa_lab.tools.base import CheckOutcome, verification_check

MAXIMAL_RHO = 4
RATIONAL_H20_02 = 2


@verification_check(
    "maximal-picard",
    "base torus has maximal Picard number",
    "the base of an Iwasawa manifold is isogenous to E × E with E a CM curve, so rho = 4",
)
def handle_maximal_picard(lattice: HeisLattice) -> CheckOutcome:
    """ρ(T) = 4 and dim H^{2,0+0,2}_ℚ(T) = 2 for the base T = ℂ²/Δ"""
    torus = lattice.base_torus()
    rho, h20 = picard_number(torus), h20_02_dim(torus)
    witnesses = {
        "d": lattice.field.d,
        "rho": rho,
        "h20_02": h20,
        "expected": {"rho": MAXIMAL_RHO, "h20_02": RATIONAL_H20_02},
    }
    return rho == MAXIMAL_RHO and h20 == RATIONAL_H20_02, witnesses
