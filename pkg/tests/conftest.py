import functools

import pytest

from frac_hardy.radial_calculus import angular_kernel, make_grid


@functools.lru_cache(maxsize=None)
def grid_and_kernel(N, s, count=256, r_min=1e-3, r_max=1e3):
    g = make_grid(r_min, r_max, count, N)
    return g, angular_kernel(g, s)


@pytest.fixture(scope="session")
def gk():
    return grid_and_kernel


@functools.lru_cache(maxsize=None)
def cached_solve(N, s, frac, count=256, init="profile", seed=0):
    from frac_hardy.constants import Params
    from frac_hardy.variational import SolveConfig, maximize_Q

    return maximize_Q(Params.from_fraction(N, s, frac), SolveConfig(count=count, init=init, seed=seed))


@pytest.fixture(scope="session")
def solve():
    return cached_solve


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
