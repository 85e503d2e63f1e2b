# conftest.py
import pytest

from latticelinear.graph import Graph, path_graph
from latticelinear.marriage import SmpInstance


@pytest.fixture
def g4():
    # Two disjoint edges v1-v2 and v3-v4.
    return Graph(4, [(0, 1), (2, 3)])


@pytest.fixture
def two_stars():
    # Centres 1 and 7, three leaves each.
    return Graph(8, [(1, 0), (1, 2), (1, 3), (7, 4), (7, 5), (7, 6)])


@pytest.fixture
def path():
    return lambda n: path_graph(n)


@pytest.fixture
def triangle():
    return Graph(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def edge():
    return Graph(2, [(0, 1)])


@pytest.fixture
def smp_instance():
    # Men A, J, T = 0, 1, 2; women K, Z, M = 0, 1, 2.
    return SmpInstance(
        men_pref=((1, 0, 2), (1, 0, 2), (0, 2, 1)),
        women_pref=((1, 2, 0), (0, 1, 2), (2, 1, 0)),
    )


@pytest.fixture
def square_with_tail():
    # Square v2-v3-v4-v5 with v1 hanging off v3; v1 and v5 are three hops apart.
    return Graph(5, [(0, 2), (1, 2), (1, 4), (2, 3), (3, 4)])
