from pathlib import Path

import pytest

from betaweibull.cli import bundled_dataset

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def meeker():
    return bundled_dataset()


@pytest.fixture(params=["python", "compiled"])
def kernels(request):
    from betaweibull._backend import get_kernels
    try:
        return get_kernels(request.param)
    except ImportError:
        pytest.skip("compiled kernels not built")


# one PASS/FAIL line per acceptance criterion, shown after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
