import os
import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

# first calls pay numba/sympy warm-up, so wall-clock deadlines are meaningless
settings.register_profile("default", deadline=None)
settings.load_profile("default")

REPO = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def cache_dir() -> Path:
    """Field-table cache shared across the session (and across runs)."""
    d = Path(os.environ.get("MONOCUBIC_CACHE_DIR", REPO / ".cache"))
    d.mkdir(parents=True, exist_ok=True)
    return d


@pytest.fixture(scope="session")
def tables_1e7(cache_dir):
    from monocubic.enumeration import enumerate_fields

    return {s: enumerate_fields(10**7, s, shards=4, cache_dir=cache_dir) for s in (1, -1)}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance criteria 1-10")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
