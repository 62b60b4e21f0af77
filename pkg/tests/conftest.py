import pytest

from cartlabel import Graph, ProductInstance


@pytest.fixture
def star_instance():
    k2 = Graph.complete(2)
    return ProductInstance((k2, k2, k2), ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)))
