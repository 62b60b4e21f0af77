"""Graphs, Cartesian product instances, degeneracy orders and instance generators."""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .exceptions import SizeBudgetError, ValidationError

DEFAULT_BUDGET = 1 << 24


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Edges are normalized to ``(u, v)`` with ``u < v`` and stored sorted.
    """

    n: int
    edges: tuple = ()
    adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError("negative vertex count")
        seen = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if u < 0 or v >= self.n:
                raise ValidationError(f"edge ({u}, {v}) out of range for n={self.n}")
            if (u, v) in seen:
                raise ValidationError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        nbrs = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        object.__setattr__(self, "adj", tuple(frozenset(s) for s in nbrs))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def min_degree(self) -> int:
        return min((len(a) for a in self.adj), default=0)

    def induced_subgraph(self, vertices: Iterable[int]) -> "Graph":
        """Subgraph induced by ``vertices``, relabeled in increasing order."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(keep), tuple(edges))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple(itertools.combinations(range(n), 2)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise ValidationError("a cycle needs at least 3 vertices")
        return cls(n, tuple((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def edgeless(cls, n: int) -> "Graph":
        return cls(n, ())


def is_product_edge(factors: Sequence[Graph], a: Sequence[int], b: Sequence[int]) -> bool:
    """Tuples differ in exactly one coordinate, and that pair is a factor edge."""
    diff = [i for i, (x, y) in enumerate(zip(a, b)) if x != y]
    return len(diff) == 1 and factors[diff[0]].has_edge(a[diff[0]], b[diff[0]])


@dataclass(frozen=True)
class ProductInstance:
    """Vertex set embedded in ``factors[0] x ... x factors[d-1]``.

    ``edges is None`` means induced mode; otherwise ``edges`` lists the kept
    edges over tuple indices (explicit mode).  Factors are restricted to the
    vertices actually used by some tuple on construction.
    """

    factors: tuple
    tuples: tuple
    edges: Optional[tuple] = None

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValidationError("a product instance needs at least one factor")
        d = len(factors)
        tuples = tuple(tuple(int(c) for c in t) for t in self.tuples)
        for idx, t in enumerate(tuples):
            if len(t) != d:
                raise ValidationError(f"tuple {idx} has length {len(t)}, expected {d}")
            for j, c in enumerate(t):
                if not 0 <= c < factors[j].n:
                    raise ValidationError(f"tuple {idx} coordinate {j} = {c} not a vertex of factor {j}")
        if len(set(tuples)) != len(tuples):
            raise ValidationError("duplicate tuples in instance")

        # restrict each factor to its used vertices, keeping their relative order
        new_factors = []
        columns = list(zip(*tuples)) if tuples else [() for _ in range(d)]
        remaps = []
        for j, g in enumerate(factors):
            used = sorted(set(columns[j]))
            if len(used) == g.n:
                new_factors.append(g)
                remaps.append(None)
            else:
                new_factors.append(g.induced_subgraph(used))
                remaps.append({v: i for i, v in enumerate(used)})
        if any(r is not None for r in remaps):
            tuples = tuple(
                tuple(c if r is None else r[c] for c, r in zip(t, remaps)) for t in tuples
            )
        object.__setattr__(self, "factors", tuple(new_factors))
        object.__setattr__(self, "tuples", tuples)

        if self.edges is not None:
            seen = set()
            for e in self.edges:
                a, b = sorted((int(e[0]), int(e[1])))
                if a < 0 or b >= len(tuples):
                    raise ValidationError(f"edge ({a}, {b}) references a missing tuple")
                if (a, b) in seen:
                    raise ValidationError(f"duplicate edge ({a}, {b})")
                if not is_product_edge(new_factors, tuples[a], tuples[b]):
                    raise ValidationError(f"edge ({a}, {b}) is not an edge of the product")
                seen.add((a, b))
            object.__setattr__(self, "edges", tuple(sorted(seen)))

    @property
    def d(self) -> int:
        return len(self.factors)

    @property
    def n(self) -> int:
        return len(self.tuples)

    @property
    def induced(self) -> bool:
        return self.edges is None

    def as_induced(self) -> "ProductInstance":
        return ProductInstance(self.factors, self.tuples, None)

    def tuple_array(self) -> np.ndarray:
        return np.array(self.tuples, dtype=np.int64).reshape(self.n, self.d)


def _check_budget(size: int, budget: int) -> None:
    if size > budget:
        raise SizeBudgetError(f"product has {size} vertices, budget is {budget}")


def cartesian_product(factors: Sequence[Graph], budget: int = DEFAULT_BUDGET) -> Graph:
    """Full product graph; vertex ``i`` is the i-th tuple in lexicographic order."""
    if not factors:
        raise ValidationError("cartesian_product needs at least one factor")
    sizes = [g.n for g in factors]
    total = math.prod(sizes)
    _check_budget(total, budget)
    strides = [math.prod(sizes[j + 1:]) for j in range(len(sizes))]
    edges = []
    for idx, t in enumerate(itertools.product(*(range(s) for s in sizes))):
        for j, g in enumerate(factors):
            for v in g.adj[t[j]]:
                if v > t[j]:
                    edges.append((idx, idx + (v - t[j]) * strides[j]))
    return Graph(total, tuple(edges))


def induced_edges(instance: ProductInstance) -> list:
    """Edges of the graph induced by the instance's tuples, without building the product."""
    index = {t: i for i, t in enumerate(instance.tuples)}
    edges = []
    for a, t in enumerate(instance.tuples):
        for j, g in enumerate(instance.factors):
            for v in g.adj[t[j]]:
                if v > t[j]:
                    b = index.get(t[:j] + (v,) + t[j + 1:])
                    if b is not None:
                        edges.append((a, b) if a < b else (b, a))
    return edges


def realize(instance: ProductInstance) -> Graph:
    """The graph a product instance describes; vertex ``i`` is tuple ``i``."""
    if instance.induced:
        return Graph(instance.n, tuple(induced_edges(instance)))
    return Graph(instance.n, instance.edges)


@dataclass(frozen=True)
class DegeneracyOrder:
    """``order[r]`` is the vertex of rank ``r``; ``rank`` is the inverse permutation."""

    order: tuple
    k: int

    @property
    def rank(self) -> tuple:
        r = [0] * len(self.order)
        for i, v in enumerate(self.order):
            r[v] = i
        return tuple(r)

    def later_neighbors(self, g: Graph) -> list:
        rank = self.rank
        return [sorted(w for w in g.adj[v] if rank[w] > rank[v]) for v in range(g.n)]


def degeneracy_order(g: Graph) -> DegeneracyOrder:
    """Min-degree peeling; ties broken by smallest vertex index."""
    deg = [len(a) for a in g.adj]
    heap = [(deg[v], v) for v in range(g.n)]
    heapq.heapify(heap)
    removed = [False] * g.n
    order = []
    k = 0
    while heap:
        dv, v = heapq.heappop(heap)
        if removed[v] or dv != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        k = max(k, dv)
        for w in g.adj[v]:
            if not removed[w]:
                deg[w] -= 1
                heapq.heappush(heap, (deg[w], w))
    return DegeneracyOrder(tuple(order), k)


# -- generators ---------------------------------------------------------------

def _full_instance(factors: Sequence[Graph], budget: int) -> ProductInstance:
    total = math.prod(g.n for g in factors)
    _check_budget(total, budget)
    tuples = tuple(itertools.product(*(range(g.n) for g in factors)))
    return ProductInstance(tuple(factors), tuples)


def gen_hypercube(d: int, budget: int = DEFAULT_BUDGET) -> ProductInstance:
    return _full_instance([Graph.complete(2)] * d, budget)


def gen_hamming(d: int, a: int, budget: int = DEFAULT_BUDGET) -> ProductInstance:
    return _full_instance([Graph.complete(a)] * d, budget)


def gen_grid(dims: Sequence[int], budget: int = DEFAULT_BUDGET) -> ProductInstance:
    return _full_instance([Graph.path(s) for s in dims], budget)


def gen_random_sub(base: ProductInstance, density: float, seed: int) -> ProductInstance:
    """Keep each induced edge of ``base`` independently with probability ``density``."""
    if not 0.0 <= density <= 1.0:
        raise ValidationError(f"density {density} outside [0, 1]")
    edges = sorted(induced_edges(base))
    keep = np.random.default_rng(seed).random(len(edges)) < density
    kept = tuple(e for e, k in zip(edges, keep) if k)
    return ProductInstance(base.factors, base.tuples, kept)


def gen_dense_monotone(g_prime: Graph, n: int) -> ProductInstance:
    """Copies of ``g_prime`` along the axes of ``g_prime^d``, glued at an anchor.

    Copy ``i`` varies coordinate ``i`` over ``V(g_prime)`` with every other
    coordinate fixed to the anchor vertex 0.  All copies share the all-anchor
    tuple, so ``d`` copies hold ``d * (n1 - 1) + 1`` distinct tuples; surplus
    vertices are dropped from the first copy (never the anchor).
    """
    n1 = g_prime.n
    if n1 < 2 or g_prime.min_degree() < 1:
        raise ValidationError("g_prime needs minimum degree at least 1")
    if n < n1:
        raise ValidationError(f"n={n} is smaller than |V(g_prime)|={n1}")
    d = max(1, math.ceil((n - 1) / (n1 - 1)))
    surplus = d * (n1 - 1) + 1 - n
    anchor = 0
    tuples = []
    for i in range(d):
        members = [v for v in range(n1) if v != anchor]
        if i == 0 and surplus:
            members = members[: len(members) - surplus]
        for v in members:
            t = [anchor] * d
            t[i] = v
            tuples.append(tuple(t))
    tuples.append((anchor,) * d)
    tuples.sort()
    return ProductInstance(tuple([g_prime] * d), tuple(tuples))


def random_factor(rng: np.random.Generator, kind: str, size: int) -> Graph:
    if kind == "path":
        return Graph.path(size)
    if kind == "cycle":
        return Graph.cycle(max(3, size))
    if kind == "clique":
        return Graph.complete(size)
    if kind == "gnp":
        pairs = list(itertools.combinations(range(size), 2))
        keep = rng.random(len(pairs)) < 0.4
        return Graph(size, tuple(p for p, k in zip(pairs, keep) if k))
    raise ValidationError(f"unknown factor kind {kind!r}")


def gen_random_induced(
    seed: int,
    kinds: Sequence[str] = ("path", "cycle", "clique"),
    max_vertices: int = 512,
    max_factors: int = 4,
    max_factor_size: int = 8,
) -> ProductInstance:
    """Random subset of tuples of a product of random factors (induced mode)."""
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, max_factors + 1))
    factors = [
        random_factor(rng, str(rng.choice(list(kinds))), int(rng.integers(2, max_factor_size + 1)))
        for _ in range(d)
    ]
    total = math.prod(g.n for g in factors)
    want = int(rng.integers(1, min(total, max_vertices) + 1))
    picks = np.sort(rng.choice(total, size=want, replace=False))
    sizes = [g.n for g in factors]
    tuples = [tuple(int(c) for c in np.unravel_index(p, sizes)) for p in picks]
    return ProductInstance(tuple(factors), tuple(tuples))
