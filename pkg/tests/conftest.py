import pytest

from cogrowth.counting import count_table
from cogrowth.marked_groups import load_preset

FINITE = ("trivial", "z2xz2", "s3")
ORACLE_PRESETS = ("trivial", "zsquared", "z2xz2", "s3", "sl2z")


@pytest.fixture(scope="session")
def tables():
    """Count tables shared across modules: n_max=50 for finite presets, 20 otherwise."""
    cache = {}

    def get(name, n_max=None):
        G = load_preset(name)
        n = n_max if n_max is not None else (50 if G.is_finite else 20)
        key = (name, n)
        if key not in cache:
            cache[key] = count_table(G, n)
        return cache[key]

    return get


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
