import numpy as np
import pytest

from simrefine.network import AttributedNetwork


def make_network(attrs, edges=(), labels=None):
    return AttributedNetwork(attributes=np.asarray(attrs, dtype=float),
                             edges=frozenset(edges),
                             labels=None if labels is None else np.asarray(labels))


def random_digraph_edges(rng, n, p):
    edges = set()
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < p:
                edges.add((i, j))
    return edges


def planted_partition_network(rng, sizes, p_in=0.6, p_out=0.05, attr_sep=4.0, d=3):
    """Directed planted-partition graph with Gaussian attribute blobs."""
    n = sum(sizes)
    labels = np.repeat(np.arange(len(sizes)), sizes)
    attrs = rng.normal(size=(n, d))
    for k in range(len(sizes)):
        attrs[labels == k] += attr_sep * rng.normal(size=d)
    edges = set()
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            p = p_in if labels[i] == labels[j] else p_out
            if rng.random() < p:
                edges.add((i, j))
    return AttributedNetwork(attributes=attrs, edges=frozenset(edges), labels=labels)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
