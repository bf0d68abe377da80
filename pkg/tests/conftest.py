import warnings
from functools import lru_cache

import pytest

from alcove_groupoid.arrangement import build_window, enumerate_alcoves
from alcove_groupoid.rootdata import build_root_datum


@lru_cache(maxsize=None)
def window(label, levi=(), p=5, N=2):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        w = build_window(build_root_datum(label), list(levi), p, N)
    enumerate_alcoves(w)
    return w


@pytest.fixture(scope="session")
def win():
    return window


@pytest.fixture(scope="session")
def a2():
    return window("A2", (), 5, 2)


@pytest.fixture(scope="session")
def a1a1():
    return window("A1xA1", (), 5, 2)


@pytest.fixture(scope="session")
def a3l():
    # L generated by the middle simple root (0-based index 1)
    return window("A3", (1,), 5, 1)


ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
