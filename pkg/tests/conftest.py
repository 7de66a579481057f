import numpy as np
import pytest

from cliquemem.core import SparseMessage, Topology, new_network

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def spurious_clique_network():
    """Learned clique A..F (clusters 0..5) plus spurious X (cluster 6) wired to A..D."""
    topo = Topology(8, 4)
    net = new_network(topo)
    names = {"A": (0, 1), "B": (1, 2), "C": (2, 0), "D": (3, 3), "E": (4, 1), "F": (5, 2), "X": (6, 0)}
    net.learn(SparseMessage(tuple(names[k] for k in "ABCDEF")))
    for k in "ABCD":
        net.learn(SparseMessage((names[k], names["X"])))
    return net, names
