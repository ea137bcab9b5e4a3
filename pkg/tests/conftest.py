import sys

import pytest

from racforge import _accel


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    """Run a test once per kernel backend, restoring the previous choice."""
    if request.param == "numba" and not _accel.HAVE_NUMBA:
        pytest.skip("numba not importable")
    prev = _accel.backend()
    _accel.set_backend(request.param)
    yield request.param
    _accel.set_backend(prev)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
