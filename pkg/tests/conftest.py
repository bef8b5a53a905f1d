import itertools

import numpy as np
import pytest

from labelflow import Graph


@pytest.fixture
def triangle():
    return Graph.from_edges([(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def two_triangles():
    return Graph.from_edges([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


@pytest.fixture
def two_triangles_bridge():
    return Graph.from_edges([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


@pytest.fixture
def path3():
    return Graph.from_edges([(0, 1), (1, 2)])


@pytest.fixture
def star5():
    return Graph.from_edges([(0, i) for i in range(1, 6)])


@pytest.fixture
def two_cliques_bridge():
    edges = list(itertools.combinations(range(5), 2))
    edges += [(u + 5, v + 5) for u, v in itertools.combinations(range(5), 2)]
    edges.append((0, 5))
    return Graph.from_edges(edges)


def random_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    """Erdos-Renyi style helper used across test modules."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    if not pairs:
        pairs = [(0, 1)]
    return Graph.from_edges(pairs, num_nodes=n)
