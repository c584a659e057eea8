import numpy as np
import pytest

from kuranet import Network, OscParams


@pytest.fixture
def k2():
    """Two nodes, one edge."""
    return Network.from_adjacency([[0, 1], [1, 0]])


@pytest.fixture
def p3():
    """Path graph 0-1-2."""
    return Network.from_adjacency([[0, 1, 0], [1, 0, 1], [0, 1, 0]])


@pytest.fixture
def edgeless1():
    return Network.from_adjacency([[0.0]])


def make_params(omega, sigma=0.5):
    return OscParams(omega=np.asarray(omega, dtype=float), sigma=sigma)
