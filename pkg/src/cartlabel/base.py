"""Adjacency labeling schemes for factor graphs.

Every label starts with a field identifying the vertex, so labels within one
graph are distinct, and every label of a scheme configured for size ``n`` has
exactly ``size(n)`` bits.  The decoders are symmetric and graph-oblivious.

Layouts (fields MSB-first, ``w = ceil_log2(n)``, ``p = ceil_log2(2n)``):

``clique``  index (w)
``path``    position (p); components of a linear forest are laid out with a gap
``cycle``   position (p), cycle length or 0 for a linear forest (p)
``knr``     index (w), then k later-neighbor indices, padded with the own index
``row``     index (w), adjacency row (n)
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ._bits import Label, ceil_log2
from .exceptions import ClassMembershipError, FormatError, ValidationError
from .graph import Graph, degeneracy_order

SCHEMES = ("clique", "path", "cycle", "knr", "row")


@dataclass(frozen=True)
class BaseScheme:
    """A scheme configured for graphs with at most ``n`` vertices.

    ``k`` bounds the later-neighbor count for ``knr`` and is ignored otherwise.
    """

    scheme_id: str
    n: int
    k: int = 0

    def __post_init__(self):
        if self.scheme_id not in SCHEMES:
            raise ValidationError(f"unknown base scheme {self.scheme_id!r}")
        if self.n < 1:
            raise ValidationError("scheme size parameter must be positive")

    @property
    def index_bits(self) -> int:
        return ceil_log2(self.n)

    @property
    def position_bits(self) -> int:
        return ceil_log2(2 * self.n)

    @property
    def bits(self) -> int:
        return size_fn(self.scheme_id, self.n, self.k)


def size_fn(scheme_id: str, n: int, k: int = 0) -> int:
    w = ceil_log2(n)
    if scheme_id == "clique":
        return w
    if scheme_id == "path":
        return ceil_log2(2 * n)
    if scheme_id == "cycle":
        return 2 * ceil_log2(2 * n)
    if scheme_id == "knr":
        return (k + 1) * w
    if scheme_id == "row":
        return w + n
    raise ValidationError(f"unknown base scheme {scheme_id!r}")


def make_scheme(scheme_id: str, n: int, graphs: Iterable[Graph] = ()) -> BaseScheme:
    """Configure ``scheme_id`` for size ``n``; ``knr`` takes k from ``graphs``."""
    k = 0
    if scheme_id == "knr":
        k = max((degeneracy_order(g).k for g in graphs), default=0)
    return BaseScheme(scheme_id, n, k)


# -- class membership -----------------------------------------------------------

def _components(g: Graph) -> list:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_linear_forest(g: Graph) -> bool:
    return all(len(a) <= 2 for a in g.adj) and g.m == g.n - len(_components(g))


def is_cycle(g: Graph) -> bool:
    return g.n >= 3 and all(len(a) == 2 for a in g.adj) and len(_components(g)) == 1


def is_clique(g: Graph) -> bool:
    return g.m == g.n * (g.n - 1) // 2


def _walk(g: Graph, start: int) -> list:
    """Vertices of the path or cycle through ``start``, in traversal order."""
    walk, prev, cur = [start], None, start
    while True:
        nxt = sorted(w for w in g.adj[cur] if w != prev)
        if not nxt or nxt[0] == start:
            return walk
        prev, cur = cur, nxt[0]
        walk.append(cur)


def _forest_positions(g: Graph) -> list:
    pos = [0] * g.n
    at = 0
    for comp in _components(g):
        ends = [v for v in comp if len(g.adj[v]) <= 1]
        for v in _walk(g, min(ends)):
            pos[v] = at
            at += 1
        at += 1
    return pos


def check_member(scheme: BaseScheme, g: Graph) -> None:
    if g.n > scheme.n:
        raise ClassMembershipError(f"graph has {g.n} vertices, scheme is configured for {scheme.n}")
    sid = scheme.scheme_id
    if sid == "clique" and not is_clique(g):
        raise ClassMembershipError("clique scheme needs a complete graph")
    if sid == "path" and not is_linear_forest(g):
        raise ClassMembershipError("path scheme needs a path or a disjoint union of paths")
    if sid == "cycle" and not (is_cycle(g) or is_linear_forest(g)):
        raise ClassMembershipError("cycle scheme needs a cycle or a disjoint union of paths")
    if sid == "knr":
        k = degeneracy_order(g).k
        if k > scheme.k:
            raise ClassMembershipError(f"graph has degeneracy {k}, scheme allows {scheme.k}")


# -- encode / decode --------------------------------------------------------------

def encode_base(scheme: BaseScheme, g: Graph) -> list:
    check_member(scheme, g)
    sid, w, p = scheme.scheme_id, scheme.index_bits, scheme.position_bits
    if sid == "clique":
        return [Label(v, w) for v in range(g.n)]
    if sid == "path":
        return [Label(x, p) for x in _forest_positions(g)]
    if sid == "cycle":
        if is_cycle(g):
            pos = [0] * g.n
            for i, v in enumerate(_walk(g, 0)):
                pos[v] = i
            length = g.n
        else:
            pos, length = _forest_positions(g), 0
        return [Label((x << p) | length, 2 * p) for x in pos]
    if sid == "knr":
        order = degeneracy_order(g)
        labels = []
        for v, later in enumerate(order.later_neighbors(g)):
            slots = list(later) + [v] * (scheme.k - len(later))
            value = v
            for u in slots:
                value = (value << w) | u
            labels.append(Label(value, scheme.bits))
        return labels
    # row
    labels = []
    for v in range(g.n):
        row = 0
        for u in g.adj[v]:
            row |= 1 << (scheme.n - 1 - u)
        labels.append(Label((v << scheme.n) | row, scheme.bits))
    return labels


def _fields(value: int, width: int, count: int) -> list:
    mask = (1 << width) - 1
    return [(value >> (width * (count - 1 - i))) & mask for i in range(count)]


def decode_base(scheme: BaseScheme, a: Label, b: Label) -> bool:
    s = scheme.bits
    if a.length != s or b.length != s:
        raise FormatError(f"{scheme.scheme_id} labels must have {s} bits, got {a.length} and {b.length}")
    sid, w, p = scheme.scheme_id, scheme.index_bits, scheme.position_bits
    if sid == "clique":
        return a.value != b.value
    if sid == "path":
        return abs(a.value - b.value) == 1
    if sid == "cycle":
        ia, la = a.value >> p, a.value & ((1 << p) - 1)
        ib, lb = b.value >> p, b.value & ((1 << p) - 1)
        gap = abs(ia - ib)
        return gap == 1 or (la == lb and la >= 3 and gap == la - 1)
    if sid == "knr":
        fa = _fields(a.value, w, scheme.k + 1) if w else [0] * (scheme.k + 1)
        fb = _fields(b.value, w, scheme.k + 1) if w else [0] * (scheme.k + 1)
        if fa[0] == fb[0]:
            return False
        return fb[0] in fa[1:] or fa[0] in fb[1:]
    # row
    n = scheme.n
    ia, ib = a.value >> n, b.value >> n
    if ia == ib or ia >= n or ib >= n:
        return False
    return bool((a.value >> (n - 1 - ib)) & 1) or bool((b.value >> (n - 1 - ia)) & 1)


def encode_factors(scheme: BaseScheme, factors: Sequence[Graph]) -> list:
    """Base labels of every factor, all at the scheme's common width."""
    return [encode_base(scheme, g) for g in factors]


def choose_scheme(n: int, graphs: Sequence[Graph]) -> BaseScheme:
    """Smallest built-in scheme whose class contains every graph in ``graphs``."""
    best = None
    for sid in SCHEMES:
        scheme = make_scheme(sid, n, graphs)
        try:
            for g in graphs:
                check_member(scheme, g)
        except ClassMembershipError:
            continue
        if best is None or scheme.bits < best.bits:
            best = scheme
    return best
