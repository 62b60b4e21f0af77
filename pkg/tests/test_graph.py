import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartlabel import (
    Graph,
    ProductInstance,
    cartesian_product,
    degeneracy_order,
    gen_dense_monotone,
    gen_grid,
    gen_hamming,
    gen_hypercube,
    gen_random_induced,
    gen_random_sub,
    realize,
)
from cartlabel.exceptions import SizeBudgetError, ValidationError

from .oracles import brute_edges, to_nx


def test_square():
    g = cartesian_product([Graph.complete(2), Graph.complete(2)])
    assert (g.n, g.m) == (4, 4)


def test_single_factor_is_itself():
    g = Graph.cycle(5)
    assert cartesian_product([g]) == g


def test_k2_k3_edge_count_matches_formula_and_networkx():
    g = cartesian_product([Graph.complete(2), Graph.complete(3)])
    # |V(G)||E(H)| + |V(H)||E(G)|
    assert (g.n, g.m) == (6, 2 * 3 + 3 * 1)
    ref = nx.cartesian_product(nx.complete_graph(2), nx.complete_graph(3))
    assert nx.is_isomorphic(to_nx(g), ref)


def test_realize_q3_and_empty_explicit(star_instance):
    q3 = realize(gen_hypercube(3))
    assert (q3.n, q3.m) == (8, 12)
    inst = gen_hypercube(3)
    empty = ProductInstance(inst.factors, inst.tuples, ())
    assert realize(empty).m == 0


def test_star_in_hypercube(star_instance):
    g = realize(star_instance)
    assert sorted(g.edges) == [(0, 1), (0, 2), (0, 3)]


@pytest.mark.parametrize("g, k", [(Graph.path(4), 1), (Graph.complete(5), 4)])
def test_degeneracy_small(g, k):
    assert degeneracy_order(g).k == k


def test_degeneracy_q3_matches_core_number():
    g = realize(gen_hypercube(3))
    assert degeneracy_order(g).k == 3 == max(nx.core_number(to_nx(g)).values())


def test_generators_sizes():
    assert realize(gen_hamming(2, 3)).m == 18
    grid = realize(gen_grid([5, 5]))
    assert (grid.n, grid.m) == (25, 2 * 5 * 4)


def test_budget():
    with pytest.raises(SizeBudgetError):
        gen_hypercube(10, budget=512)


def test_random_sub_extremes_and_density():
    base = gen_hypercube(5)
    full = realize(gen_random_sub(base, 1.0, 3))
    assert set(full.edges) == set(realize(base).edges)
    assert realize(gen_random_sub(base, 0.0, 3)).m == 0
    half = realize(gen_random_sub(base, 0.5, 3)).m
    assert 0.3 * 80 <= half <= 0.7 * 80
    assert gen_random_sub(base, 0.5, 3) == gen_random_sub(base, 0.5, 3)
    with pytest.raises(ValidationError):
        gen_random_sub(base, 1.5, 0)


@pytest.mark.parametrize("gp, n, bound", [
    (Graph.complete(2), 4, 1),
    (Graph.complete(4), 16, 12),
    (Graph.cycle(5), 20, 10),
])
def test_dense_monotone(gp, n, bound):
    inst = gen_dense_monotone(gp, n)
    g = realize(inst)
    assert g.n == n
    assert g.m >= bound


def test_instance_validation():
    k2 = Graph.complete(2)
    with pytest.raises(ValidationError):
        ProductInstance((k2,), ((0,), (0,)))
    with pytest.raises(ValidationError):
        ProductInstance((k2,), ((0,), (2,)))
    with pytest.raises(ValidationError):
        # not a product edge
        ProductInstance((k2, k2), ((0, 0), (1, 1)), ((0, 1),))
    with pytest.raises(ValidationError):
        Graph(2, ((0, 0),))


graphs = st.integers(min_value=1, max_value=9).flatmap(
    lambda n: st.lists(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1]),
        max_size=20,
    ).map(lambda es: Graph(n, tuple({(min(e), max(e)) for e in es})))
)


@given(graphs)
def test_degeneracy_order_property(g):
    order = degeneracy_order(g)
    later = order.later_neighbors(g)
    assert max((len(x) for x in later), default=0) <= order.k
    assert sorted(order.order) == list(range(g.n))
    ref = max(nx.core_number(to_nx(g)).values(), default=0)
    assert order.k == ref


@given(st.lists(graphs, min_size=3, max_size=3))
@settings(max_examples=30)
def test_product_associative_edge_counts(gs):
    a, b, c = gs
    left = cartesian_product([cartesian_product([a, b]), c])
    right = cartesian_product([a, cartesian_product([b, c])])
    flat = cartesian_product([a, b, c])
    assert left.m == right.m == flat.m


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=25, deadline=None)
def test_realize_equals_brute_force(seed):
    inst = gen_random_induced(seed, max_vertices=60, max_factors=3, max_factor_size=5)
    assert set(realize(inst).edges) == brute_edges(inst)
    sub = gen_random_sub(inst, 0.5, seed)
    assert set(realize(sub).edges) == brute_edges(sub)


@given(st.sampled_from([Graph.complete(4), Graph.cycle(5), realize(gen_hypercube(3)), Graph.path(3)]),
       st.integers(min_value=8, max_value=70))
@settings(max_examples=30, deadline=None)
def test_dense_monotone_vertex_count(gp, n):
    assert realize(gen_dense_monotone(gp, n)).n == n
