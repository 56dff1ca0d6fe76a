"""Acceptance criteria 1-10, one pass/fail line each.

Criteria 1-9 live in ``quotvir.verification`` (shared with ``quotvir verify``);
criterion 10 runs that command end to end.
"""

import subprocess
import sys
import time

import pytest

from conftest import ACCEPTANCE_LINES
from quotvir.verification import CRITERIA


def _report(ok: bool, name: str, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, len(CRITERIA) + 1)])
def test_criterion(criterion):
    result = criterion()
    _report(result.ok, result.name, result.detail)
    assert result.ok, result.detail


def test_criterion_10_verify_cli():
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "quotvir", "verify"],
        capture_output=True,
        text=True,
        timeout=120,
        check=False,
    )
    elapsed = time.perf_counter() - start
    lines = [l for l in proc.stdout.splitlines() if l.startswith("[")]
    ok = proc.returncode == 0 and elapsed < 60 and len(lines) == 9 and all(l.startswith("[PASS]") for l in lines)
    _report(ok, "10 verify command", f"exit {proc.returncode}, {len(lines)} checks, {elapsed:.2f}s (limit 60s)")
    assert ok, proc.stdout + proc.stderr
