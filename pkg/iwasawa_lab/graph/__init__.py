from .verify_suite import SuiteInput, VerifySuite, prepare_input, run_suite, run_suite_sync

__all__ = ["SuiteInput", "VerifySuite", "prepare_input", "run_suite", "run_suite_sync"]
