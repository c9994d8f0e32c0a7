"""
Verification checks, one handler per property. Each handler returns a
``VerificationReport``; CHECK_ORDER is the canonical order of a suite.
"""

from .invariant_model import handle_invariant_model
from .lattice_roundtrip import handle_lattice_roundtrip
from .line_splitting import handle_line_splitting
from .maximal_picard import handle_maximal_picard
from .shared_cm import handle_shared_cm
from .subtorus_cm import handle_subtorus_cm

CHECK_HANDLERS = {
    handler.check_name: handler
    for handler in (
        handle_lattice_roundtrip,
        handle_maximal_picard,
        handle_shared_cm,
        handle_line_splitting,
        handle_subtorus_cm,
        handle_invariant_model,
    )
}

CHECK_ORDER = tuple(CHECK_HANDLERS)

__all__ = [
    "CHECK_HANDLERS",
    "CHECK_ORDER",
    "handle_lattice_roundtrip",
    "handle_maximal_picard",
    "handle_shared_cm",
    "handle_line_splitting",
    "handle_subtorus_cm",
    "handle_invariant_model",
]
