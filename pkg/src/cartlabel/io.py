"""Text formats: graphs (.gr), product instances (.cpi) and label files (.lbl).

.gr::

    c optional comment
    p <n> <m>
    e <u> <v>            (m lines, u < v)

.cpi::

    factors <d>
    factor <n_i> <m_i>   followed by m_i lines "e <u> <v>", once per factor
    vertices <N>         followed by N lines of d factor-vertex ids
    edges induced | edges explicit <M>   followed by M lines "<a> <b>"

.lbl::

    scheme cartlabel v1 mode <mode> n <n> seed <hex16> q <q> s <s> k <k> base <id> \
        kbase <k> kg <k> sketch_seed <hex16> lift_seed <hex16> tries <p1> <lift>
    zset <|Z|> <hex> ...                 (base labels the XOR lift was built on)
    <index> <bitlen> <hex>               (one line per vertex)
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator, TextIO, Union

from ._bits import Label
from .base import BaseScheme
from .exceptions import FormatError, ValidationError
from .graph import Graph, ProductInstance
from .labeler import VERSION, EncodingDescriptor
from .xorlift import rebuild_lift

PathLike = Union[str, Path]


def _int(tok: str, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"bad {what}: {tok!r}") from None


def _hex(tok: str, what: str) -> int:
    try:
        return int(tok, 16)
    except ValueError:
        raise FormatError(f"bad {what}: {tok!r}") from None


def _content_lines(lines: Iterable[str]) -> Iterator[list]:
    for line in lines:
        toks = line.split()
        if toks and toks[0] != "c":
            yield toks


def _expect(it: Iterator[list], keyword: str, nargs: int) -> list:
    try:
        toks = next(it)
    except StopIteration:
        raise FormatError(f"unexpected end of input, wanted {keyword!r}") from None
    if toks[0] != keyword or len(toks) != nargs + 1:
        raise FormatError(f"expected '{keyword}' with {nargs} arguments, got {' '.join(toks)!r}")
    return toks[1:]


def _read_edges(it: Iterator[list], m: int, n: int) -> list:
    edges = []
    for _ in range(m):
        u, v = _expect(it, "e", 2)
        u, v = _int(u, "vertex"), _int(v, "vertex")
        if not 0 <= u < v < n:
            raise FormatError(f"edge e {u} {v} violates 0 <= u < v < {n}")
        edges.append((u, v))
    return edges


def _wrap(fn):
    try:
        return fn()
    except ValidationError as exc:
        raise FormatError(str(exc)) from exc


# -- graphs ------------------------------------------------------------------------

def format_graph(g: Graph) -> str:
    lines = [f"p {g.n} {g.m}"] + [f"e {u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    it = _content_lines(text.splitlines())
    n, m = (_int(t, "count") for t in _expect(it, "p", 2))
    edges = _read_edges(it, m, n)
    if next(it, None) is not None:
        raise FormatError("trailing content after graph edges")
    return _wrap(lambda: Graph(n, tuple(edges)))


def write_graph(path: PathLike, g: Graph) -> None:
    Path(path).write_text(format_graph(g))


def read_graph(path: PathLike) -> Graph:
    return parse_graph(Path(path).read_text())


# -- product instances -------------------------------------------------------------

def format_instance(inst: ProductInstance) -> str:
    lines = [f"factors {inst.d}"]
    for g in inst.factors:
        lines.append(f"factor {g.n} {g.m}")
        lines.extend(f"e {u} {v}" for u, v in g.edges)
    lines.append(f"vertices {inst.n}")
    lines.extend(" ".join(map(str, t)) for t in inst.tuples)
    if inst.induced:
        lines.append("edges induced")
    else:
        lines.append(f"edges explicit {len(inst.edges)}")
        lines.extend(f"{a} {b}" for a, b in inst.edges)
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> ProductInstance:
    it = _content_lines(text.splitlines())
    (d,) = (_int(t, "factor count") for t in _expect(it, "factors", 1))
    factors = []
    for _ in range(d):
        n_i, m_i = (_int(t, "count") for t in _expect(it, "factor", 2))
        edges = _read_edges(it, m_i, n_i)
        factors.append(_wrap(lambda: Graph(n_i, tuple(edges))))
    (n,) = (_int(t, "vertex count") for t in _expect(it, "vertices", 1))
    tuples = []
    for _ in range(n):
        toks = next(it, None)
        if toks is None or len(toks) != d:
            raise FormatError(f"expected a tuple of {d} ids, got {toks!r}")
        tuples.append(tuple(_int(t, "factor vertex") for t in toks))
    toks = next(it, None)
    if toks == ["edges", "induced"]:
        edges = None
    elif toks and len(toks) == 3 and toks[:2] == ["edges", "explicit"]:
        edges = []
        for _ in range(_int(toks[2], "edge count")):
            pair = next(it, None)
            if pair is None or len(pair) != 2:
                raise FormatError(f"expected an edge 'a b', got {pair!r}")
            edges.append((_int(pair[0], "tuple index"), _int(pair[1], "tuple index")))
        edges = tuple(edges)
    else:
        raise FormatError(f"expected 'edges induced' or 'edges explicit <M>', got {toks!r}")
    if next(it, None) is not None:
        raise FormatError("trailing content after instance")
    return _wrap(lambda: ProductInstance(tuple(factors), tuple(tuples), edges))


def write_instance(path: PathLike, inst: ProductInstance) -> None:
    Path(path).write_text(format_instance(inst))


def read_instance(path: PathLike) -> ProductInstance:
    return parse_instance(Path(path).read_text())


# -- label files -------------------------------------------------------------------

def header_text(desc: EncodingDescriptor) -> str:
    first = (
        f"scheme cartlabel v{desc.version} mode {desc.mode} n {desc.n} seed {desc.seed:016x} "
        f"q {desc.q} s {desc.s} k {desc.k} base {desc.base.scheme_id} kbase {desc.base.k} "
        f"kg {desc.k_g} sketch_seed {desc.sketch_seed:016x} lift_seed {desc.lift_seed:016x} "
        f"tries {desc.phase1_attempts} {desc.lift.attempts}"
    )
    zset = " ".join(["zset", str(len(desc.lift.labels))] + [z.to_hex() for z in desc.lift.labels])
    return first + "\n" + zset + "\n"


def label_line(index: int, label: Label) -> str:
    return f"{index} {label.length} {label.to_hex()}"


def format_labels(desc: EncodingDescriptor, labels) -> str:
    body = "".join(label_line(i, lab) + "\n" for i, lab in enumerate(labels))
    return header_text(desc) + body


def parse_header(first: str, second: str) -> EncodingDescriptor:
    toks = first.split()
    if toks[:3] != ["scheme", "cartlabel", f"v{VERSION}"]:
        raise FormatError(f"not a cartlabel v{VERSION} label file")
    rest = toks[3:]
    fields = {}
    i = 0
    while i < len(rest):
        key = rest[i]
        if key == "tries":
            fields[key] = rest[i + 1:i + 3]
            i += 3
        else:
            if i + 1 >= len(rest):
                raise FormatError(f"header field {key!r} has no value")
            fields[key] = rest[i + 1]
            i += 2
    required = ("mode", "n", "seed", "q", "s", "k", "base", "kbase", "kg", "sketch_seed", "lift_seed")
    missing = [f for f in required if f not in fields]
    if missing:
        raise FormatError(f"header is missing {missing}")
    mode = fields["mode"]
    if mode not in ("induced", "subgraph"):
        raise FormatError(f"unknown mode {mode!r}")
    n = _int(fields["n"], "n")
    s = _int(fields["s"], "s")
    try:
        base = BaseScheme(fields["base"], n, _int(fields["kbase"], "kbase"))
    except ValidationError as exc:
        raise FormatError(str(exc)) from exc
    if base.bits != s:
        raise FormatError(f"header s={s} but base scheme {base.scheme_id} has {base.bits} bits")

    ztoks = second.split()
    if len(ztoks) < 2 or ztoks[0] != "zset":
        raise FormatError("missing zset line")
    count = _int(ztoks[1], "zset size")
    if len(ztoks) != count + 2:
        raise FormatError(f"zset declares {count} labels, has {len(ztoks) - 2}")
    Z = [Label.from_hex(t, s) for t in ztoks[2:]]
    lift = rebuild_lift(Z, _hex(fields["lift_seed"], "lift_seed"))
    tries = fields.get("tries", ["1", "1"])
    lift = type(lift)(lift.s, lift.seed, lift.labels, _int(tries[1], "tries"), lift.phi, lift.inverse)
    return EncodingDescriptor(
        n, mode, _hex(fields["seed"], "seed"), _int(fields["q"], "q"),
        _hex(fields["sketch_seed"], "sketch_seed"), base, lift,
        _int(fields["k"], "k"), _int(fields["kg"], "kg"), VERSION, _int(tries[0], "tries"),
    )


def parse_label_line(line: str) -> tuple:
    toks = line.split()
    if len(toks) != 3:
        raise FormatError(f"bad label line {line.strip()!r}")
    index, length = _int(toks[0], "index"), _int(toks[1], "bit length")
    return index, Label.from_hex(toks[2], length)


def parse_labels(text: str):
    lines = text.splitlines()
    if len(lines) < 2:
        raise FormatError("label file needs a header and a zset line")
    desc = parse_header(lines[0], lines[1])
    labels = [None] * desc.n
    for line in lines[2:]:
        if not line.strip():
            continue
        index, lab = parse_label_line(line)
        if not 0 <= index < desc.n or labels[index] is not None:
            raise FormatError(f"bad or repeated label index {index}")
        labels[index] = lab
    if any(lab is None for lab in labels):
        raise FormatError("label file is missing vertices")
    return desc, labels


def write_labels(path: PathLike, desc: EncodingDescriptor, labels) -> None:
    Path(path).write_text(format_labels(desc, labels))


def read_labels(path: PathLike):
    return parse_labels(Path(path).read_text())


def read_query_labels(fh: TextIO, x: int, y: int):
    """Descriptor plus the labels of ``x`` and ``y``, touching no other label line.

    Other lines are only compared on their leading index token; their payload
    is never parsed.  Raises ``KeyError`` for a vertex with no label line.
    """
    desc = parse_header(fh.readline(), fh.readline())
    wanted = {str(x), str(y)}
    found = {}
    for line in fh:
        head, _, _ = line.partition(" ")
        if head in wanted:
            index, lab = parse_label_line(line)
            found[index] = lab
            if len(found) == len(wanted):
                break
    missing = [v for v in (x, y) if v not in found]
    if missing:
        raise KeyError(missing[0])
    return desc, found[x], found[y]
