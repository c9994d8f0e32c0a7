from typing import Any, Dict, Optional

from iwasawa_lab.services.ce_cohomology import (
    IWASAWA_NAMES,
    CEAlgebra,
    betti_numbers,
    distinguished_forms,
    euler_characteristic,
    frolicher_pages,
    is_closed,
    is_exact,
    iwasawa_algebra,
    poincare_duality_holds,
)
from iwasawa_lab.tools.base import CheckOutcome, verification_check

IWASAWA_BETTI = [1, 4, 8, 10, 8, 4, 1]


def _form_certificates(algebra: CEAlgebra) -> Dict[str, Any]:
    if not all(algebra.has_generator(name) for name in IWASAWA_NAMES):
        return {"available": False}
    forms = distinguished_forms(algebra)
    primitive = is_exact(forms.tau)
    return {
        "available": True,
        "omega": forms.omega.to_dict(),
        "omega_closed": is_closed(forms.omega),
        "tau": forms.tau.to_dict(),
        "tau_exact": primitive is not None,
        "tau_primitive": primitive.to_dict() if primitive is not None else None,
        "d_gamma_alpha_bar_beta_bar_is_tau": forms.tau_primitive.d() == forms.tau,
    }


@verification_check(
    "invariant-model",
    "invariant-form model has the expected cohomology and certificates",
    "Nomizu: invariant forms compute the cohomology of a nilmanifold; the Frölicher sequence does not degenerate at E1",
)
def handle_invariant_model(algebra: Optional[CEAlgebra] = None, delta_rank: int = 4, rmax: int = 3) -> CheckOutcome:
    """
    Betti numbers, duality, χ = 0, b₁ = rank Δ, the closed form ω, the exact form τ
    and non-degeneration of the spectral sequence at E₁, on the Iwasawa model by
    default.
    """
    algebra = algebra or iwasawa_algebra()
    betti = betti_numbers(algebra)
    pages = frolicher_pages(algebra, max(rmax, 2))
    forms = _form_certificates(algebra)
    conditions = {
        "betti": betti == IWASAWA_BETTI,
        "poincare_duality": poincare_duality_holds(betti),
        "euler_zero": euler_characteristic(betti) == 0,
        "b1_equals_delta_rank": len(betti) > 1 and betti[1] == delta_rank,
        "omega_closed": bool(forms.get("omega_closed")),
        "tau_exact": bool(forms.get("tau_exact")) and bool(forms.get("d_gamma_alpha_bar_beta_bar_is_tau")),
        "e1_nondegenerate": pages.total(1) > sum(betti),
    }
    witnesses = {
        "generators": [g.name for g in algebra.generators],
        "betti": betti,
        "expected_betti": IWASAWA_BETTI,
        "euler_characteristic": euler_characteristic(betti),
        "frolicher": pages.to_dict(),
        "forms": forms,
        "conditions": conditions,
    }
    return all(conditions.values()), witnesses
