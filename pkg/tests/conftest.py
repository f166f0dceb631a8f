import pytest

from graphfilters import build_graph
from helpers import circulant_graph


@pytest.fixture
def k3():
    return build_graph([(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path4():
    return build_graph([(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def c16():
    # 4-regular, connected, non-bipartite (has triangles)
    return circulant_graph(16, (1, 2))
