"""
Verification Reports

Every check produces a ``VerificationReport``; a suite collects them in a
fixed order. Reports are deterministic apart from ``elapsed_ms``.
"""

from enum import Enum
from typing import Any, Dict, List

from pydantic import BaseModel, Field


class Verdict(str, Enum):
    passed = "pass"
    failed = "fail"
    malformed = "malformed"


# Process exit code per verdict
EXIT_CODES = {Verdict.passed: 0, Verdict.failed: 1, Verdict.malformed: 2}


class VerificationReport(BaseModel):
    name: str = Field(..., description="Check name, e.g. maximal-picard")
    claim: str = Field(..., description="The property the check verifies, in words")
    reference: str = Field(..., description="The mathematical result the claim rests on")
    verdict: Verdict
    witnesses: Dict[str, Any] = Field(default_factory=dict, description="Values supporting the verdict")
    elapsed_ms: float = Field(0.0, description="Wall time of the check")

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def stable_dump(self) -> Dict[str, Any]:
        """Report without timing, for byte-level comparisons"""
        return self.model_dump(mode="json", exclude={"elapsed_ms"})


class SuiteReport(BaseModel):
    subject: str = Field(..., description="Input the suite ran on")
    reports: List[VerificationReport] = Field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        verdicts = {r.verdict for r in self.reports}
        if Verdict.failed in verdicts:
            return Verdict.failed
        if Verdict.malformed in verdicts:
            return Verdict.malformed
        return Verdict.passed

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def summary(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "verdict": self.verdict.value,
            "reports": [r.model_dump(mode="json") for r in self.reports],
        }
