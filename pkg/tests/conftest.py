import sys
import numpy as np
import pytest

from chipdist import _kernels_numba, _kernels_numpy, chips, divisor, feedback
from chipdist.graphs import build_digraph, build_graph

KERNELS = {"numba": _kernels_numba, "numpy": _kernels_numpy}


@pytest.fixture(params=sorted(KERNELS))
def backend(request, monkeypatch):
    """Run the test once per kernel module."""
    mod = KERNELS[request.param]
    for consumer in (chips, divisor, feedback):
        monkeypatch.setattr(consumer, "kernels", mod)
    return mod


@pytest.fixture
def k3():
    return build_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def triple_edge():
    return build_graph(2, [(0, 1, 3)])


@pytest.fixture
def double_edge():
    return build_graph(2, [(0, 1, 2)])


@pytest.fixture
def c3():
    return build_digraph(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def d2():
    return build_digraph(2, [(0, 1), (1, 0)])


@pytest.fixture
def d4():
    # Figure digraph with v1..v4 labelled 0..3
    return build_digraph(4, [(0, 3), (2, 0), (1, 2), (3, 1), (3, 2), (2, 3)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
