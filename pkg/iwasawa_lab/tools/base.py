"""
Shared plumbing for verification checks.

A check function returns ``(passed, witnesses)``; ``verification_check`` times
it and turns the outcome into a ``VerificationReport``. Precondition errors
raised by the engines become the ``malformed`` verdict instead of escaping.
"""

import functools
import time
from typing import Any, Callable, Dict, Tuple

import structlog

from iwasawa_lab.models.report import Verdict, VerificationReport
from iwasawa_lab.services.errors import IwasawaLabError
from iwasawa_lab.utils.codec import jsonable

logger = structlog.get_logger(__name__)

CheckOutcome = Tuple[bool, Dict[str, Any]]

PRECONDITION_ERRORS = (IwasawaLabError, ValueError, KeyError)


def verification_check(name: str, claim: str, reference: str):
    def decorator(fn: Callable[..., CheckOutcome]) -> Callable[..., VerificationReport]:
        @functools.wraps(fn)
        def wrapper(*args, **kwargs) -> VerificationReport:
            start = time.perf_counter()
            try:
                passed, witnesses = fn(*args, **kwargs)
                verdict = Verdict.passed if passed else Verdict.failed
            except PRECONDITION_ERRORS as e:
                verdict = Verdict.malformed
                witnesses = {"error": str(e).strip("'\""), "error_type": type(e).__name__}
            elapsed_ms = round((time.perf_counter() - start) * 1000, 3)
            witnesses = jsonable(witnesses)
            if verdict is Verdict.failed:
                logger.warning("check failed", check=name, witnesses=witnesses)
            elif verdict is Verdict.malformed:
                logger.warning("check not applicable", check=name, error=witnesses["error"])
            else:
                logger.info("check passed", check=name, elapsed_ms=elapsed_ms)
            return VerificationReport(
                name=name,
                claim=claim,
                reference=reference,
                verdict=verdict,
                witnesses=witnesses,
                elapsed_ms=elapsed_ms,
            )

        wrapper.check_name = name
        wrapper.claim = claim
        wrapper.reference = reference
        return wrapper

    return decorator


def malformed_report(name: str, claim: str, reference: str, error: Exception) -> VerificationReport:
    """Report for a check that could not start, e.g. when its input failed to build"""
    return VerificationReport(
        name=name,
        claim=claim,
        reference=reference,
        verdict=Verdict.malformed,
        witnesses={"error": str(error), "error_type": type(error).__name__},
    )
