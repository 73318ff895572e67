import numpy as np
import pytest
from hypothesis import settings

from moebiuskit.constructions import smooth_family

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

EPS_VALUES = (0.2, 0.1, 0.05)
ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def smooth_strips():
    return {eps: smooth_family(eps) for eps in EPS_VALUES}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def record_criterion():
    def record(number, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        line = f"criterion {number:2d}: {status}  {detail}".rstrip()
        ACCEPTANCE_LINES[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
