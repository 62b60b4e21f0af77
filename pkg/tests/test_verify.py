import csv
import io
import itertools
import random

import pytest

from cartlabel import Label, ProductInstance, decode, encode, gen_hypercube, gen_random_induced, gen_random_sub, realize
from cartlabel.exceptions import ValidationError
from cartlabel.verify import (
    CSV_FIELDS,
    bench_sizes,
    fit_log_linear,
    knr_baseline_bits,
    oracle_adjacent,
    reports_to_csv,
    stat_test_phase1,
    verify_all_pairs,
)

from .oracles import brute_adjacent


def test_oracle_basics():
    inst = gen_hypercube(3)
    assert not oracle_adjacent(inst, 0, 0)
    assert oracle_adjacent(inst, 0, 1)
    deleted = ProductInstance(inst.factors, inst.tuples, tuple(e for e in realize(inst).edges if e != (0, 1)))
    assert not oracle_adjacent(deleted, 0, 1)


@pytest.mark.parametrize("seed", range(10))
def test_oracle_matches_brute_force(seed):
    inst = gen_random_sub(gen_random_induced(seed, max_vertices=50), 0.6, seed)
    for x, y in itertools.combinations(range(inst.n), 2):
        assert oracle_adjacent(inst, x, y) == brute_adjacent(inst, x, y)


def flip(label, i):
    return Label(label.value ^ (1 << (label.length - 1 - i)), label.length)


def test_fault_injection_on_aggregate_bit():
    inst = gen_hypercube(4)
    desc, labels = encode(inst)
    assert verify_all_pairs(inst, desc, labels).passed
    bad = list(labels)
    bad[0] = flip(bad[0], desc.phase1_bits + 3)
    report = verify_all_pairs(inst, desc, bad)
    assert report.mismatches and all(0 in m[:2] for m in report.mismatches)


def test_every_outcome_changing_flip_is_caught():
    inst = gen_random_sub(gen_hypercube(3), 0.5, 4)
    desc, labels = encode(inst)
    rng = random.Random(0)
    for _ in range(60):
        v = rng.randrange(inst.n)
        bad = list(labels)
        bad[v] = flip(labels[v], rng.randrange(labels[v].length))
        changed = False
        for u in range(inst.n):
            if u == v:
                continue
            try:
                changed |= decode(desc, bad[u], bad[v]) != oracle_adjacent(inst, u, v)
            except Exception:
                changed = True
        assert changed == (not verify_all_pairs(inst, desc, bad).passed)


@pytest.mark.parametrize("method", ["brute", "screened"])
def test_methods_agree(method):
    inst = gen_random_sub(gen_hypercube(5), 0.5, 1)
    desc, labels = encode(inst)
    report = verify_all_pairs(inst, desc, labels, method=method)
    assert report.passed and report.pairs_checked == 496
    bad = list(labels)
    bad[3] = flip(bad[3], desc.phase1_bits + 1)
    assert not verify_all_pairs(inst, desc, bad, method=method).passed


def test_sampled_above_cap():
    inst = gen_hypercube(6)
    desc, labels = encode(inst)
    report = verify_all_pairs(inst, desc, labels, cap=32, sample_pairs=500)
    assert report.sampled and report.passed
    # random non-identical pairs plus every true edge
    assert report.pairs_checked <= 500 + 192


def test_stat_test_phase1():
    out = stat_test_phase1(4, 3, 2000, seed=1)
    assert out["dist1_accept_rate"] == 1.0
    assert out["distgt1_accept_rate"] <= 15 / 16 + 3 * out["distgt1_sigma"]
    lo, hi = out["ci"]
    assert lo <= out["distgt1_accept_rate"] <= hi
    with pytest.raises(ValidationError):
        stat_test_phase1(4, 3, 10)


def test_binary_d2_rate_near_quarter():
    out = stat_test_phase1(2, 2, 20000, seed=3)
    lo, hi = out["ci"]
    assert lo <= 0.25 <= hi


def test_bench_csv_and_fit():
    reports = bench_sizes("hypercube", [64, 128], ("induced", "subgraph"))
    text = reports_to_csv(reports)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_FIELDS and len(rows) == 4
    for r in reports:
        assert r.max_bits == r.phase1_bits + r.xor_bits + r.phase3_bits or r.mode == "subgraph"
        assert r.baseline_bits == knr_baseline_bits(r.n, r.kG)
    a, b, resid = fit_log_linear([2, 4, 8], [3, 5, 7])
    assert (round(a, 9), round(b, 9), round(resid, 9)) == (1.0, 2.0, 0.0)


def test_hashed_binary_rate_includes_symbol_collisions():
    # each differing coordinate keeps its hashed bit with probability 1/2:
    # 1/4 * 1/4 (both flip) + 1/2 (one flips) + 1/4 (none) = 13/16
    out = stat_test_phase1(2, 2, 20000, seed=3, binary=False)
    lo, hi = out["ci"]
    assert lo <= 13 / 16 <= hi
