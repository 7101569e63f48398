import io

import numpy as np
import pytest

from ghype.models.configs import QuadratureConfig
from network.edgelist import load_edgelist, load_partition, load_zkc
from network.multigraph import MultiGraph

TWO_BLOCK_EDGES = """\
a b 4
a c 3
b c 5
d e 4
d f 2
e f 6
c d 1
"""

TWO_BLOCK_PARTITION = """\
a left
b left
c left
d right
e right
f right
"""


@pytest.fixture(scope="session")
def zkc() -> MultiGraph:
    return load_zkc()


@pytest.fixture
def quadrature() -> QuadratureConfig:
    return QuadratureConfig()


@pytest.fixture
def two_block_graph() -> MultiGraph:
    return load_edgelist(io.StringIO(TWO_BLOCK_EDGES), directed=False)


@pytest.fixture
def two_block_partition():
    return load_partition(io.StringIO(TWO_BLOCK_PARTITION))


@pytest.fixture
def small_directed() -> MultiGraph:
    adjacency = np.array([[0, 2, 1], [1, 0, 3], [2, 1, 0]])
    return MultiGraph(adjacency, directed=True, selfloops=False, labels=("x", "y", "z"))
