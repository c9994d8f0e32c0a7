#!/usr/bin/env python3
"""
Corpus Suite Runner

Runs every applicable verification check on each bundled document and
compares the suite verdict with the expected one. Torus documents have no
checks and are skipped. Exits 1 when any verdict differs.

Usage:
    python scripts/run_corpus_suite.py [--workers N] [--height H]
"""

import argparse
import asyncio
import sys
from pathlib import Path

from rich.console import Console
from rich.table import Table

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from iwasawa_lab.graph.verify_suite import run_suite  # noqa: E402
from iwasawa_lab.models.documents import TorusDocument  # noqa: E402
from iwasawa_lab.utils.load_input import list_corpus, load_input  # noqa: E402
from iwasawa_lab.utils.logging import configure_logging  # noqa: E402

# Negative controls; everything else must pass
EXPECTED_FAILURES = {"gamma-violation", "abelian-ce", "heisenberg3-ce"}

console = Console()


async def run_all(workers: int, height: int) -> int:
    table = Table(title="corpus suite")
    for column in ("tag", "kind", "checks", "verdict", "expected"):
        table.add_column(column)
    mismatches = 0
    for tag, kind, _ in list_corpus():
        document = load_input(f"corpus:{tag}")
        if isinstance(document, TorusDocument):
            table.add_row(tag, kind, "-", "skipped", "-")
            continue
        suite = await run_suite(document, f"corpus:{tag}", max_workers=workers, height=height)
        expected = "fail" if tag in EXPECTED_FAILURES else "pass"
        verdict = suite.verdict.value
        style = "green" if verdict == expected else "bold red"
        mismatches += verdict != expected
        table.add_row(tag, kind, str(len(suite.reports)), f"[{style}]{verdict}[/]", expected)
    console.print(table)
    return mismatches


def main():
    parser = argparse.ArgumentParser(description="Run the verification suite over the bundled corpus")
    parser.add_argument("--workers", type=int, default=4, help="Concurrent checks per document")
    parser.add_argument("--height", type=int, default=2, help="Line height bound")
    parser.add_argument("--log-level", default="WARNING")
    args = parser.parse_args()

    configure_logging(args.log_level)
    mismatches = asyncio.run(run_all(args.workers, args.height))
    if mismatches:
        console.print(f"[bold red]{mismatches} document(s) with an unexpected verdict[/]")
        sys.exit(1)
    console.print("[green]all verdicts as expected[/]")


if __name__ == "__main__":
    main()
