import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from profitmax import graph


@pytest.fixture
def path3():
    """Directed path 0 -> 1 -> 2."""
    return graph.from_edges([(0, 1), (1, 2)], directed=True, num_nodes=3)


@pytest.fixture
def star4():
    """Undirected star: hub 0 with leaves 1-3."""
    return graph.from_edges([(0, 1), (0, 2), (0, 3)], directed=False)


def random_graph(rng, n_nodes, n_edges, directed=True):
    """Random simple graph; retries until at least one edge survives."""
    pairs = set()
    while len(pairs) < n_edges:
        u, v = rng.integers(0, n_nodes, size=2)
        if u != v:
            pairs.add((int(u), int(v)))
    return graph.from_edges(sorted(pairs), directed=directed, num_nodes=n_nodes)


def make_cb(rng, n, cost_range=(50.0, 100.0), benefit_range=(800.0, 1000.0)):
    return graph.CostBenefit(
        cost=rng.uniform(*cost_range, size=n),
        benefit=rng.uniform(*benefit_range, size=n),
    )
