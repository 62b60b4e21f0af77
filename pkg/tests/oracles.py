"""Reference implementations used as test oracles."""
import itertools

import networkx as nx
from cartlabel import Graph, ProductInstance


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def brute_adjacent(instance: ProductInstance, x: int, y: int) -> bool:
    """Adjacency from a networkx product, independent of the package's oracle."""
    tx, ty = instance.tuples[x], instance.tuples[y]
    diff = [i for i in range(instance.d) if tx[i] != ty[i]]
    if len(diff) != 1 or not to_nx(instance.factors[diff[0]]).has_edge(tx[diff[0]], ty[diff[0]]):
        return False
    return instance.induced or (min(x, y), max(x, y)) in set(instance.edges)


def brute_edges(instance: ProductInstance) -> set:
    return {(x, y) for x, y in itertools.combinations(range(instance.n), 2) if brute_adjacent(instance, x, y)}


def hamming(a, b) -> int:
    return sum(u != v for u, v in zip(a, b))
