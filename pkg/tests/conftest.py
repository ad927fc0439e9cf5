import math
import sys

import pytest

from spectrakit.spectrum import EnumerationBudget, enumerate_spectrum
from spectrakit.surface import FenchelNielsenSurface, build_genus2, build_one_holed_torus

TR3_LENGTH = 2.0 * math.acosh(1.5)
REGULAR_CUFF = 2.0 * math.acosh(2.0)


@pytest.fixture(scope="session")
def tr3_torus():
    """tr A = tr B = 3 at zero twist; then tr AB = 4.5 and the boundary is 2 acosh(2.125)."""
    return build_one_holed_torus(TR3_LENGTH, 0.0, 2.0 * math.acosh(2.125))


@pytest.fixture(scope="session")
def regular_fn():
    return FenchelNielsenSurface("closed_genus2", (REGULAR_CUFF,) * 3, (0.0, 0.0, 0.0))


@pytest.fixture(scope="session")
def sample_fn():
    return FenchelNielsenSurface("closed_genus2", (2.4, 2.9, 2.6), (0.3, -0.5, 0.8))


@pytest.fixture(scope="session")
def sample_group(sample_fn):
    return build_genus2(sample_fn)


@pytest.fixture(scope="session")
def sample_spectrum(sample_fn):
    return enumerate_spectrum(sample_fn, EnumerationBudget(6.0, certified=True))


@pytest.fixture(scope="session")
def regular_spectrum(regular_fn):
    return enumerate_spectrum(regular_fn, EnumerationBudget(6.0, certified=True))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
