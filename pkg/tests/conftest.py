import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from loopkit import core, enumerate as en, subloops  # noqa: E402

settings.register_profile("loopkit", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("loopkit")


@pytest.fixture(scope="session")
def z2():
    return core.cyclic_group(2)


@pytest.fixture(scope="session")
def z4():
    return core.cyclic_group(4)


@pytest.fixture(scope="session")
def klein():
    return core.direct_product(core.cyclic_group(2), core.cyclic_group(2))


@pytest.fixture(scope="session")
def nonassoc5():
    """First order-5 loop in corpus order that is not associative."""
    from loopkit.identities import right_nucleus
    return next(L for L in en.corpus(5) if len(right_nucleus(L)) < 5)


@pytest.fixture(scope="session")
def special_upto5():
    return [GH for n in range(2, 6) for GH in en.enumerate_special(n)]


@pytest.fixture(scope="session")
def special6():
    return list(en.enumerate_special(6))


@pytest.fixture(scope="session")
def q2_finding():
    rows = [[0, 1, 2, 3, 4, 5], [1, 0, 3, 2, 5, 4], [2, 3, 4, 5, 0, 1],
            [3, 2, 5, 4, 1, 0], [4, 5, 0, 1, 3, 2], [5, 4, 1, 0, 2, 3]]
    return subloops.make_special(core.loop_from_rows(rows), (0, 1))


ACCEPTANCE: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
