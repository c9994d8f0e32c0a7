"""
iwasawa-lab: exact computations on Iwasawa manifolds.

Lattices in the complex Heisenberg group, their lattice data (Δ, Γ, q), the
base tori with their Hodge and CM data, the invariant-form model with its
spectral sequence, and verification checks tying these together.
"""

__version__ = "0.1.0"

from iwasawa_lab.config import Settings, get_settings
from iwasawa_lab.graph.verify_suite import run_suite, run_suite_sync
from iwasawa_lab.models.report import SuiteReport, Verdict, VerificationReport
from iwasawa_lab.utils.load_input import load_input

__all__ = [
    "__version__",
    "Settings",
    "get_settings",
    "load_input",
    "run_suite",
    "run_suite_sync",
    "Verdict",
    "VerificationReport",
    "SuiteReport",
]
