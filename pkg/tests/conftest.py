import itertools
import random

import pytest

from kicolor.graph import (
    complete_graph, cycle_graph, empty_graph, path_graph, petersen_graph, star_graph,
)
from kicolor.solver import Params

ACCEPTANCE_LINES = []


def record_acceptance(label, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def naive_count(g, params):
    """Count proper colorings by trying every assignment; only for tiny inputs."""
    psi = list(params.psi)
    legal = params.legal()
    idx = range(len(psi))
    total = 0
    for assign in itertools.product(idx, repeat=g.n):
        if all(legal[assign[u], assign[v]] for u, v in g.edges()):
            total += 1
    return total


def small_named_graphs():
    return {
        "empty3": empty_graph(3),
        "P1": path_graph(1),
        "P2": path_graph(2),
        "P4": path_graph(4),
        "C3": cycle_graph(3),
        "C4": cycle_graph(4),
        "C5": cycle_graph(5),
        "K4": complete_graph(4),
        "star3": star_graph(3),
    }


def all_params(max_q, max_k):
    for k in range(1, max_k + 1):
        for i in range(0, k + 1):
            for q in range(1, max_q + 1):
                yield Params(q, k, i)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def petersen():
    return petersen_graph()
