import numpy as np
import pytest

# Filled by tests/test_acceptance.py; echoed once at the end of the session.
ACCEPTANCE_RESULTS = {}


def record(criterion, passed, detail=""):
    ACCEPTANCE_RESULTS[criterion] = (bool(passed), detail)
    line = f"ACCEPTANCE {criterion}: {'PASS' if passed else 'FAIL'}"
    print(line + (f"  ({detail})" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: (int(k.rstrip("abc")), k)):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(
            f"criterion {key}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else "")
        )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
