import io as stdio

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartlabel import Graph, decode, encode, gen_dense_monotone, gen_grid, gen_random_induced, gen_random_sub
from cartlabel import io as cio
from cartlabel.exceptions import FormatError


def test_graph_round_trip(tmp_path):
    g = Graph.cycle(6)
    cio.write_graph(tmp_path / "c6.gr", g)
    text = (tmp_path / "c6.gr").read_text()
    assert cio.read_graph(tmp_path / "c6.gr") == g
    assert cio.format_graph(cio.parse_graph(text)) == text


def test_graph_comments_and_errors():
    assert cio.parse_graph("c hi\np 2 1\ne 0 1\n") == Graph(2, ((0, 1),))
    for bad in ["p 2 1\ne 1 0\n", "p 2 2\ne 0 1\n", "p 2 1\ne 0 1\ne 0 1\n", "q 1 0\n", "p x 0\n"]:
        with pytest.raises(FormatError):
            cio.parse_graph(bad)


@given(st.integers(min_value=0, max_value=10**6), st.booleans())
@settings(max_examples=30, deadline=None)
def test_instance_round_trip(seed, explicit):
    inst = gen_random_induced(seed, max_vertices=40)
    if explicit:
        inst = gen_random_sub(inst, 0.5, seed)
    text = cio.format_instance(inst)
    again = cio.parse_instance(text)
    assert again == inst
    assert cio.format_instance(again) == text


@pytest.mark.parametrize("text", [
    "factors 1\nfactor 2 1\ne 0 1\nvertices 2\n0\n0\nedges induced\n",
    "factors 1\nfactor 2 1\ne 0 1\nvertices 2\n0\n1\nedges explicit 1\n0 5\n",
    "factors 1\nfactor 2 1\ne 0 1\nvertices 2\n0\n1\nedges sometimes\n",
    "factors 1\nfactor 2 1\ne 0 1\nvertices 2\n0\n1\nedges induced\nextra\n",
])
def test_instance_format_errors(text):
    with pytest.raises(FormatError):
        cio.parse_instance(text)


@pytest.mark.parametrize("make", [
    lambda: gen_grid([3, 4]),
    lambda: gen_random_sub(gen_grid([3, 3]), 0.5, 1),
    lambda: gen_dense_monotone(Graph.complete(4), 10),
])
def test_label_file_round_trip(make):
    inst = make()
    desc, labels = encode(inst)
    text = cio.format_labels(desc, labels)
    d2, l2 = cio.parse_labels(text)
    assert l2 == labels
    assert cio.format_labels(d2, l2) == text
    for x in range(inst.n):
        for y in range(inst.n):
            assert decode(d2, l2[x], l2[y]) == decode(desc, labels[x], labels[y])


def test_label_file_errors():
    desc, labels = encode(gen_grid([2, 2]))
    text = cio.format_labels(desc, labels)
    lines = text.splitlines(keepends=True)
    with pytest.raises(FormatError):
        cio.parse_labels("".join(lines[:-1]))
    with pytest.raises(FormatError):
        cio.parse_labels(lines[0].replace("v1", "v9") + "".join(lines[1:]))
    with pytest.raises(FormatError):
        cio.parse_labels("".join(lines[:2]) + lines[2] + lines[2] + "".join(lines[3:]))


def test_query_reads_only_two_label_lines():
    desc, labels = encode(gen_grid([3, 3]))
    lines = cio.format_labels(desc, labels).splitlines(keepends=True)
    body = [ln if ln.split()[0] in ("1", "4") else f"{ln.split()[0]} garbage !!\n" for ln in lines[2:]]
    fh = stdio.StringIO("".join(lines[:2] + body))
    d, lx, ly = cio.read_query_labels(fh, 1, 4)
    assert (lx, ly) == (labels[1], labels[4])
    with pytest.raises(KeyError):
        cio.read_query_labels(stdio.StringIO("".join(lines)), 1, 99)
