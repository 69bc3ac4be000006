import warnings

import pytest

from levydyn.errors import GridWarning

RESULTS: list[str] = []


def record(number: int, title: str, passed: bool, detail: str) -> str:
    line = f"{'PASS' if passed else 'FAIL'} criterion {number:2d} {title}: {detail}"
    RESULTS.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)


@pytest.fixture
def quiet_grid():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GridWarning)
        yield
