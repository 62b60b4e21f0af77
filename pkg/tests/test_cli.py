import itertools

import pytest

from cartlabel import io as cio
from cartlabel.cli import main
from cartlabel.verify import oracle_adjacent


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


@pytest.fixture
def q4(tmp_path, run):
    cpi, lbl = tmp_path / "q4.cpi", tmp_path / "q4.lbl"
    assert run("gen", "hypercube", "--d", 4, "--out", cpi)[0] == 0
    assert run("encode", cpi, "--out", lbl)[0] == 0
    return cpi, lbl


def test_gen_hypercube(q4):
    cpi, _ = q4
    assert cio.read_instance(cpi).n == 16


def test_encode_uniform_and_deterministic(q4, tmp_path, run):
    cpi, lbl = q4
    desc, labels = cio.read_labels(lbl)
    assert len(labels) == 16 and len({lab.length for lab in labels}) == 1
    again = tmp_path / "again.lbl"
    run("encode", cpi, "--out", again)
    assert again.read_bytes() == lbl.read_bytes()


@pytest.mark.parametrize("x, y, answer", [(0, 1, "adjacent"), (0, 3, "not-adjacent"), (0, 0, "not-adjacent")])
def test_query(q4, run, x, y, answer):
    code, out, _ = run("query", q4[1], x, y)
    assert (code, out.strip()) == (0, answer)


def test_query_missing_vertex(q4, run):
    code, _, err = run("query", q4[1], 0, 16)
    assert code == 2 and "16" in err


def test_query_ignores_other_label_lines(q4, run, tmp_path):
    lines = q4[1].read_text().splitlines(keepends=True)
    broken = lines[:2] + [ln if ln.split()[0] in ("0", "1") else "zz\n" for ln in lines[2:]]
    path = tmp_path / "broken.lbl"
    path.write_text("".join(broken))
    assert run("query", path, 0, 1)[1].strip() == "adjacent"


def test_random_sub_reproducible(tmp_path, run):
    a, b = tmp_path / "a.cpi", tmp_path / "b.cpi"
    for p in (a, b):
        run("gen", "random-sub", "--base", "hypercube", "--d", 5, "--density", 0.5, "--seed", 1, "--out", p)
    assert a.read_bytes() == b.read_bytes()
    assert not cio.read_instance(a).induced


def test_subgraph_encode_then_verify(tmp_path, run):
    cpi, lbl = tmp_path / "s.cpi", tmp_path / "s.lbl"
    run("gen", "random-sub", "--base", "hypercube", "--d", 5, "--density", 0.5, "--seed", 1, "--out", cpi)
    assert run("encode", cpi, "--out", lbl)[0] == 0
    code, out, _ = run("verify", cpi, lbl)
    assert code == 0 and "mismatches 0" in out


def test_verify_corrupted_line(q4, run, tmp_path):
    cpi, lbl = q4
    desc, labels = cio.read_labels(lbl)
    lines = lbl.read_text().splitlines(keepends=True)
    idx, length, payload = lines[2 + 5].split()
    # flip the last bit, which sits in the xor aggregate
    lines[2 + 5] = f"{idx} {length} {int(payload, 16) ^ 1:0{len(payload)}x}\n"
    bad = tmp_path / "bad.lbl"
    bad.write_text("".join(lines))
    code, out, _ = run("verify", cpi, bad)
    assert code == 1
    assert any(ln.startswith("mismatch") and " 5 " in f" {ln} " for ln in out.splitlines())


def test_dense_monotone(tmp_path, run):
    gr, cpi = tmp_path / "k4.gr", tmp_path / "dm.cpi"
    gr.write_text("p 4 6\ne 0 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3\ne 2 3\n")
    assert run("gen", "dense-monotone", "--gprime", gr, "--n", 16, "--out", cpi)[0] == 0
    from cartlabel import realize

    g = realize(cio.read_instance(cpi))
    assert g.n == 16 and g.m >= 12


def test_stats_fields_sum(q4, run, tmp_path):
    cpi, lbl = tmp_path / "q10.cpi", tmp_path / "q10.lbl"
    run("gen", "hypercube", "--d", 10, "--out", cpi)
    run("encode", cpi, "--out", lbl)
    code, out, _ = run("stats", lbl)
    fields = dict(line.split(" ", 1) for line in out.strip().splitlines())
    assert code == 0
    assert int(fields["max_bits"]) == int(fields["phase1_bits"]) + int(fields["xor_bits"]) + int(fields["phase3_bits"])


def test_bench_csv(run):
    code, out, _ = run("bench", "--n", "16,32", "--modes", "induced,subgraph")
    assert code == 0
    assert out.splitlines()[0] == "family,n,mode,max_bits,mean_bits,phase1_bits,xor_bits,phase3_bits,baseline_bits,kH,kG"
    assert len(out.splitlines()) == 5


def test_exit_codes(tmp_path, run):
    assert run("verify", tmp_path / "missing.cpi", tmp_path / "missing.lbl")[0] == 3
    bad = tmp_path / "bad.cpi"
    bad.write_text("factors x\n")
    assert run("encode", bad)[0] == 3
    assert run("gen", "hypercube")[0] == 2
    cpi = tmp_path / "q.cpi"
    run("gen", "hypercube", "--d", 3, "--out", cpi)
    assert run("encode", cpi, "--mode", "subgraph")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["nope"])
    assert info.value.code == 2


@pytest.mark.parametrize("family, extra", [
    ("hypercube", ["--d", 3]),
    ("hamming", ["--d", 2, "--a", 3]),
    ("grid", ["--dims", "3,3"]),
])
def test_query_matches_oracle_for_shipped_families(tmp_path, run, family, extra):
    cpi, lbl = tmp_path / "i.cpi", tmp_path / "i.lbl"
    run("gen", family, *extra, "--out", cpi)
    run("encode", cpi, "--out", lbl)
    inst = cio.read_instance(cpi)
    for x, y in itertools.combinations(range(inst.n), 2):
        answer = run("query", lbl, x, y)[1].strip()
        assert (answer == "adjacent") == oracle_adjacent(inst, x, y)
