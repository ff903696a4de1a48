import numpy as np
import pytest

from glctkit import Graph, GlctParams, adjacency, build_operator, cycle_graph

CHIRPED_32 = GlctParams(alpha=0.8, beta=32.0, chirp_l=0.5, chirp_f=1.0)
CHIRPED_10 = GlctParams(alpha=0.8, beta=10.0, chirp_l=0.5, chirp_f=1.0)


@pytest.fixture(scope="session")
def cycle32_op():
    return build_operator(adjacency(cycle_graph(32)), CHIRPED_32)


@pytest.fixture(scope="session")
def cycle10_op():
    return build_operator(adjacency(cycle_graph(10)), CHIRPED_10)


@pytest.fixture(scope="session")
def two_triangle_graph():
    """Two triangles with distinct edge weights; the top two shift eigenvectors
    live on separate components, giving deterministic unqualified sampling sets."""
    edges = ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 0.5), (4, 5, 0.5), (3, 5, 0.5))
    return Graph(n=6, edges=edges)


def random_signal(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)
