import numpy as np
import pytest

from walkdist.stats import derive_stream


@pytest.fixture
def rng(request):
    # one stream per test, keyed on the test name
    key = sum(ord(c) * (i + 1) for i, c in enumerate(request.node.name))
    return derive_stream(20240601, key)


@pytest.fixture
def nprng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys
    for name, mod in list(sys.modules.items()):
        if name.endswith("test_acceptance") and getattr(mod, "RESULTS", None):
            terminalreporter.section("acceptance criteria")
            for line in mod.RESULTS:
                terminalreporter.write_line(line)
