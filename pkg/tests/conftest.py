import sys

import pytest

from detmoments.algebra import sym


@pytest.fixture
def s():
    """Shorthand symbol constructor."""
    return sym


def pytest_terminal_summary(terminalreporter):
    # echo the acceptance lines collected by test_acceptance.py, if it ran
    for name, mod in list(sys.modules.items()):
        if name.endswith("test_acceptance") and getattr(mod, "RESULTS", None):
            terminalreporter.section("acceptance criteria")
            for k in sorted(mod.RESULTS):
                terminalreporter.write_line(mod.RESULTS[k])
            break
