import time
from contextlib import contextmanager

import pytest

_RESULTS_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_RESULTS_KEY] = []


class Recorder:
    def __init__(self, sink):
        self.sink = sink

    @contextmanager
    def __call__(self, label, limit):
        """Time a criterion, fail it when it runs past `limit` seconds, and log the verdict."""
        start = time.perf_counter()
        ok, detail = False, ""
        try:
            yield
            elapsed = time.perf_counter() - start
            ok = elapsed < limit
            detail = "" if ok else f"took {elapsed:.1f}s, limit {limit}s"
        except AssertionError as exc:
            detail = str(exc).splitlines()[0] if str(exc) else "assertion failed"
            raise
        finally:
            elapsed = time.perf_counter() - start
            line = f"{'PASS' if ok else 'FAIL'}  {label:<34} {elapsed:8.2f}s"
            print(line + (f"  {detail}" if detail else ""))
            self.sink.append(line + (f"  {detail}" if detail else ""))
        assert ok, detail


@pytest.fixture
def criterion(request):
    return Recorder(request.config.stash[_RESULTS_KEY])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_RESULTS_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
