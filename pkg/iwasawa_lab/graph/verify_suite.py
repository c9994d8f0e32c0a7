"""
Verification Suite

Runs the checks that apply to an input document concurrently and merges the
reports in canonical order. Checks are independent and CPU-bound; each runs in
a worker thread, at most ``max_workers`` at a time.
"""

import asyncio
import time
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Tuple

import structlog

from iwasawa_lab.config import get_settings
from iwasawa_lab.models.documents import (
    CEAlgebraDocument,
    ConstructDocument,
    HeisenbergDocument,
    InputDocument,
)
from iwasawa_lab.models.report import SuiteReport, VerificationReport
from iwasawa_lab.services.ce_cohomology import CEAlgebra
from iwasawa_lab.services.errors import InputDocumentError, IwasawaLabError
from iwasawa_lab.services.exact_fields import QuadField
from iwasawa_lab.services.heisenberg import HeisLattice, construct_iwasawa, validate_lattice
from iwasawa_lab.services.zlattice import ZLattice
from iwasawa_lab.tools import CHECK_HANDLERS, CHECK_ORDER
from iwasawa_lab.tools.base import malformed_report

logger = structlog.get_logger(__name__)

LATTICE_CHECKS = ("maximal-picard", "shared-cm", "line-splitting", "subtorus-cm")


@dataclass
class SuiteInput:
    """What the checks need, prepared once per document"""

    subject: str
    lattice_data: Optional[Tuple[ZLattice, ZLattice, QuadField]] = None
    lattice: Optional[HeisLattice] = None
    lattice_error: Optional[Exception] = None
    algebra: Optional[CEAlgebra] = None
    delta_rank: int = 4

    @property
    def applicable(self) -> Tuple[str, ...]:
        if self.lattice_data is None and self.lattice is None and self.lattice_error is None:
            return ("invariant-model",)
        return CHECK_ORDER


def prepare_input(document: InputDocument, subject: str) -> SuiteInput:
    """Validate or build the lattice of a document; build failures are kept, not raised"""
    if isinstance(document, CEAlgebraDocument):
        return SuiteInput(subject, algebra=document.algebra())
    if isinstance(document, HeisenbergDocument):
        suite_input = SuiteInput(subject)
        try:
            lattice = validate_lattice(document.points())
        except IwasawaLabError as e:
            suite_input.lattice_error = e
            return suite_input
        suite_input.lattice = lattice
        suite_input.lattice_data = (lattice.delta, lattice.gamma, lattice.field)
        return suite_input
    if isinstance(document, ConstructDocument):
        delta, gamma, quad = document.lattice_data()
        suite_input = SuiteInput(subject, lattice_data=(delta, gamma, quad), delta_rank=delta.rank)
        try:
            suite_input.lattice = construct_iwasawa(delta, gamma, quad)
        except IwasawaLabError as e:
            suite_input.lattice_error = e
        return suite_input
    raise InputDocumentError(f"no verification checks apply to {document.kind} documents", location=subject)


class VerifySuite:
    """Dispatches checks for one input and gathers their reports"""

    def __init__(
        self,
        height: Optional[int] = None,
        rmax: Optional[int] = None,
        max_workers: Optional[int] = None,
        oracle_word_length: Optional[int] = None,
    ):
        settings = get_settings()
        self.height = height or settings.default_height
        self.rmax = rmax or settings.default_rmax
        self.max_workers = max_workers or settings.max_workers
        self.oracle_word_length = oracle_word_length if oracle_word_length is not None else settings.oracle_word_length

    def _job(self, name: str, suite_input: SuiteInput) -> Callable[[], VerificationReport]:
        handler = CHECK_HANDLERS[name]
        if name not in suite_input.applicable:
            error = InputDocumentError(f"check {name} does not apply to this document", location=suite_input.subject)
            return lambda: malformed_report(name, handler.claim, handler.reference, error)
        if name == "invariant-model":
            return lambda: handler(suite_input.algebra, suite_input.delta_rank, self.rmax)
        if name == "lattice-roundtrip":
            if suite_input.lattice_data is None:
                return lambda: malformed_report(name, handler.claim, handler.reference, suite_input.lattice_error)
            delta, gamma, quad = suite_input.lattice_data
            return lambda: handler(delta, gamma, quad, self.oracle_word_length)
        if suite_input.lattice is None:
            return lambda: malformed_report(name, handler.claim, handler.reference, suite_input.lattice_error)
        if name in ("line-splitting", "subtorus-cm"):
            return lambda: handler(suite_input.lattice, self.height)
        return lambda: handler(suite_input.lattice)

    async def run(self, suite_input: SuiteInput, checks: Optional[Iterable[str]] = None) -> SuiteReport:
        if checks is None:
            names = list(suite_input.applicable)
        else:
            requested = set(checks)
            unknown = requested - set(CHECK_ORDER)
            if unknown:
                raise InputDocumentError(f"unknown check(s): {', '.join(sorted(unknown))}")
            names = [name for name in CHECK_ORDER if name in requested]

        semaphore = asyncio.Semaphore(self.max_workers)

        async def run_one(name: str) -> VerificationReport:
            job = self._job(name, suite_input)
            async with semaphore:
                return await asyncio.to_thread(job)

        start = time.perf_counter()
        reports: List[VerificationReport] = list(await asyncio.gather(*(run_one(n) for n in names)))
        suite = SuiteReport(subject=suite_input.subject, reports=reports)
        logger.info(
            "suite finished",
            subject=suite_input.subject,
            verdict=suite.verdict.value,
            checks=len(reports),
            elapsed_ms=round((time.perf_counter() - start) * 1000, 3),
        )
        return suite


async def run_suite(
    document: InputDocument,
    subject: str = "<input>",
    checks: Optional[Iterable[str]] = None,
    **options,
) -> SuiteReport:
    """Prepare a document and run the selected checks (all applicable ones by default)"""
    suite_input = prepare_input(document, subject)
    return await VerifySuite(**options).run(suite_input, checks)


def run_suite_sync(document: InputDocument, subject: str = "<input>", checks: Optional[Iterable[str]] = None, **options) -> SuiteReport:
    return asyncio.run(run_suite(document, subject, checks, **options))
