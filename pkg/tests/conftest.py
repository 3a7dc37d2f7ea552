import pytest

from quadbundle import _accel

BACKENDS = ["numpy"] + (["numba"] if _accel.NUMBA_AVAILABLE else [])

CRITERIA: dict = {}


@pytest.fixture(params=BACKENDS)
def backend(request):
    prev = _accel.set_backend(request.param)
    yield request.param
    _accel.set_backend(prev)


@pytest.fixture
def criterion():
    """record(k, ok, detail): one pass/fail line per acceptance criterion."""

    def record(k, ok, detail=""):
        line = f"criterion {k}: {'PASS' if ok else 'FAIL'}" + (f" - {detail}" if detail else "")
        CRITERIA[k] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[k])
