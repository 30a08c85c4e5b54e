import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> np.ndarray:
    return np.loadtxt(FIXTURES / name, comments="#")


@pytest.fixture
def beta_fixture():
    return load_fixture("beta_20.txt")


@pytest.fixture
def kw_fixture():
    return load_fixture("kw_20.txt")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(verdicts):
        terminalreporter.write_line(verdicts[k])
