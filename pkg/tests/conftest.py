import numpy as np
import pytest

from kthit.corpus import diamond as make_diamond
from kthit.corpus import rooted_example as make_rooted_example
from kthit.corpus import triangle_chain as make_triangle_chain
from kthit.graph import Graph


@pytest.fixture
def rng():
    return np.random.RandomState(0)


@pytest.fixture
def diamond():
    return make_diamond()


@pytest.fixture
def rooted_example():
    return make_rooted_example()


@pytest.fixture
def triangle_chain():
    return make_triangle_chain(3)


@pytest.fixture
def two_triangles_bridged():
    # Triangles 0 1 2 and 3 4 5 joined by the edge 2 - 3.
    return Graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])
