import numpy as np
import pytest

from qmcbn import data
from qmcbn.bn import BayesNet, Node, parse_network

CHAIN2_TEXT = """
name chain2
node a
states a0 a1
parents
cpt
0.4 0.6
node b
states b0 b1
parents a
cpt
0.9 0.1
0.2 0.8
"""


@pytest.fixture
def chain2() -> BayesNet:
    return parse_network(CHAIN2_TEXT)


@pytest.fixture(scope="session")
def asia() -> BayesNet:
    return parse_network(data.read_text("asia.net"))


@pytest.fixture(scope="session")
def cancer() -> BayesNet:
    return parse_network(data.read_text("cancer.net"))


@pytest.fixture(scope="session")
def pinned() -> BayesNet:
    return parse_network(data.read_text("pinned.net"))


def random_net(rng: np.random.Generator, max_nodes: int = 12, max_states: int = 3) -> BayesNet:
    """Random DAG with random CPTs; parents always drawn among earlier nodes."""
    n_nodes = int(rng.integers(2, max_nodes + 1))
    ids = [f"n{i}" for i in range(n_nodes)]
    nodes: list[Node] = []
    for i in range(n_nodes):
        n_parents = int(rng.integers(0, min(3, i) + 1))
        parents = tuple(sorted(rng.choice(ids[:i], size=n_parents, replace=False))) if n_parents else ()
        card = int(rng.integers(2, max_states + 1))
        rows = 1
        for p in parents:
            rows *= len(nodes[ids.index(p)].states)
        cpt = rng.random((rows, card)) + 0.05
        cpt /= cpt.sum(axis=1, keepdims=True)
        nodes.append(Node(ids[i], tuple(f"s{j}" for j in range(card)), parents, cpt))
    return BayesNet("random", nodes)
