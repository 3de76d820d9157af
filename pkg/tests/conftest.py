import pytest

from cubicjac import PrimeField

_LOG_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LOG_KEY] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LOG_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)


class AcceptanceLog:
    def __init__(self, sink):
        self.sink = sink

    def record(self, number: int, title: str, ok: bool, detail: str) -> str:
        line = f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
        self.sink.append((number, line))
        print(line)
        return line


@pytest.fixture
def acceptance_log(request):
    return AcceptanceLog(request.config.stash[_LOG_KEY])


@pytest.fixture
def F5():
    return PrimeField(5)

