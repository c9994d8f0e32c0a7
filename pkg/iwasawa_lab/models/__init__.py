from .documents import (
    CEAlgebraDocument,
    ConstructDocument,
    HeisenbergDocument,
    InputDocument,
    TorusDocument,
    input_document_adapter,
)
from .report import EXIT_CODES, SuiteReport, Verdict, VerificationReport

__all__ = [
    "InputDocument",
    "HeisenbergDocument",
    "ConstructDocument",
    "TorusDocument",
    "CEAlgebraDocument",
    "input_document_adapter",
    "Verdict",
    "VerificationReport",
    "SuiteReport",
    "EXIT_CODES",
]
