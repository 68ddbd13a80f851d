import itertools

import pytest

from admissible.groups import CyclicGroup, FreeGroup, Heisenberg, IntegerLattice

CATALOG = {
    "Z": IntegerLattice(1),
    "Z^2": IntegerLattice(2),
    "Z^3": IntegerLattice(3),
    "heisenberg": Heisenberg(),
    "Z/12": CyclicGroup(12),
    "free2": FreeGroup(),
}


@pytest.fixture(params=sorted(CATALOG))
def catalog_group(request):
    return CATALOG[request.param]


def naive_lengths(G, max_len):
    """Minimal word length of every product of at most ``max_len`` generators."""
    best = {G.identity: 0}
    for k in range(1, max_len + 1):
        for word in itertools.product(G.generators, repeat=k):
            g = G.identity
            for s in word:
                g = G.multiply(g, s)
            best.setdefault(g, k)
    return best


_ACCEPTANCE_LINES = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.get_closest_marker("acceptance"):
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _ACCEPTANCE_LINES.append(f"{'PASS' if rep.passed else 'FAIL'}  {doc}")


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
