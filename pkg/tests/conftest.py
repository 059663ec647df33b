import time
from contextlib import contextmanager

import pytest


@pytest.fixture
def criterion(capsys):
    """Context manager that times a block and prints one PASS/FAIL line."""

    @contextmanager
    def run(number, title):
        info = {}
        start = time.perf_counter()
        status = "FAIL"
        try:
            yield info
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            detail = info.get("detail", "")
            with capsys.disabled():
                print(f"\n[{status}] criterion {number}: {title} ({elapsed:.2f} s) {detail}".rstrip())
            info["elapsed"] = elapsed

    return run
