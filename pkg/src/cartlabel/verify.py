"""Brute-force oracle, pair verification, Phase-1 statistics and size benchmarks."""
from __future__ import annotations

import csv
import io
import itertools
import math
import time
from bisect import bisect_left
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._bits import ceil_log2
from .exceptions import CartLabelError, ValidationError
from .graph import (
    ProductInstance,
    degeneracy_order,
    gen_grid,
    gen_hamming,
    gen_hypercube,
    gen_random_sub,
    realize,
)
from .labeler import DEFAULT_SEED, decode, encode, label_stats
from .sketch import (
    ACCEPT,
    DEFAULT_SAMPLE_PAIRS,
    DEFAULT_VERIFY_CAP,
    label_codes,
    rowwise_binary_codes,
    rowwise_codes,
    surviving_pairs,
)


def oracle_adjacent(instance: ProductInstance, x: int, y: int) -> bool:
    """Adjacency straight from the definition of the instance."""
    tx, ty = instance.tuples[x], instance.tuples[y]
    diff = [i for i in range(instance.d) if tx[i] != ty[i]]
    if len(diff) != 1:
        return False
    i = diff[0]
    if not instance.factors[i].has_edge(tx[i], ty[i]):
        return False
    if instance.induced:
        return True
    edge = (x, y) if x < y else (y, x)
    edges = instance.edges
    pos = bisect_left(edges, edge)
    return pos < len(edges) and edges[pos] == edge


@dataclass
class VerifyReport:
    pairs_checked: int
    mismatches: list
    retries: dict
    wall_time: float
    sampled: bool = False

    @property
    def passed(self) -> bool:
        return not self.mismatches


SCREEN_ABOVE = 1 << 10


def _screened_pairs(instance: ProductInstance, descriptor, labels: Sequence) -> list:
    """Pairs that need a full decode; every other pair decodes and tests false.

    The distance-one field is evaluated for all pairs at once, and a pair it
    rejects decodes to non-adjacent without reading anything else.  Such a pair
    is correct exactly when it is not an edge, so only accepted pairs and true
    edges are left to check one by one.
    """
    codes, ids = label_codes(descriptor.phase1, labels)
    candidates = surviving_pairs(codes)
    candidates.update(realize(instance).edges)
    return sorted(candidates)


def verify_all_pairs(
    instance: ProductInstance,
    descriptor,
    labels: Sequence,
    cap: int = DEFAULT_VERIFY_CAP,
    sample_pairs: int = DEFAULT_SAMPLE_PAIRS,
    seed: int = 0,
    method: str = "auto",
) -> VerifyReport:
    """Compare the decoder with the oracle on every pair (or a sample above ``cap``).

    ``method`` is ``"brute"`` (decode every pair), ``"screened"`` (exact, see
    :func:`_screened_pairs`) or ``"auto"`` (screened above ``SCREEN_ABOVE``
    vertices).  In sampled mode every true edge is checked in addition to the
    random pairs.  A pair whose labels fail to decode is reported with
    ``got=None``.
    """
    start = time.perf_counter()
    n = instance.n
    if len(labels) != n:
        raise ValidationError(f"{len(labels)} labels for {n} vertices")
    if method not in ("auto", "brute", "screened"):
        raise ValidationError(f"unknown verification method {method!r}")
    sampled = n > cap
    total = n * (n - 1) // 2
    if sampled:
        rng = np.random.default_rng(seed)
        a = rng.integers(0, n, sample_pairs)
        b = rng.integers(0, n, sample_pairs)
        keep = a != b
        pairs = list(zip(a[keep].tolist(), b[keep].tolist())) + list(realize(instance).edges)
        total = len(pairs)
    elif method == "screened" or (method == "auto" and n > SCREEN_ABOVE):
        pairs = _screened_pairs(instance, descriptor, labels)
    else:
        pairs = itertools.combinations(range(n), 2)
    mismatches = []
    for x, y in pairs:
        expected = oracle_adjacent(instance, x, y)
        try:
            got = decode(descriptor, labels[x], labels[y])
        except CartLabelError:
            got = None  # undecodable counts as wrong
        if got != expected:
            mismatches.append((x, y, expected, got))
    retries = {"phase1": descriptor.phase1_attempts, "lift": descriptor.lift.attempts}
    return VerifyReport(total, mismatches, retries, time.perf_counter() - start, sampled)


# -- phase 1 statistics -------------------------------------------------------------

def _wilson(successes: int, trials: int, z: float = 3.0) -> tuple:
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def _random_pairs(rng, trials: int, d: int, sigma: int, min_dist: int, max_dist: int):
    X = rng.integers(0, sigma, size=(trials, d))
    Y = X.copy()
    for t in range(trials):
        dist = int(rng.integers(min_dist, max_dist + 1))
        for j in rng.choice(d, size=dist, replace=False):
            Y[t, j] = (X[t, j] + rng.integers(1, sigma)) % sigma
    return X, Y


def stat_test_phase1(d: int, sigma_size: int, trials: int, seed: int = 0, binary: bool = None) -> dict:
    """Monte Carlo per-copy acceptance rates for distance-1 and distance->1 pairs.

    Each trial draws a fresh pair and uses a fresh sketch copy.  ``binary``
    (default: ``sigma_size == 2``) feeds the bits straight to the parity
    partition instead of hashing symbols first.
    """
    if trials < 1000:
        raise ValidationError("use at least 1000 trials")
    if d < 2 or sigma_size < 2:
        raise ValidationError("need d >= 2 and an alphabet of at least 2 symbols")
    if binary is None:
        binary = sigma_size == 2
    if binary and sigma_size != 2:
        raise ValidationError("the binary sketch needs sigma_size == 2")
    codes = rowwise_binary_codes if binary else rowwise_codes
    rng = np.random.default_rng(seed)
    copies = np.arange(trials)

    X, Y = _random_pairs(rng, trials, d, sigma_size, 1, 1)
    acc1 = ACCEPT[codes(X, seed, copies) ^ codes(Y, seed, copies)]
    X, Y = _random_pairs(rng, trials, d, sigma_size, 2, d)
    acc2 = ACCEPT[codes(X, seed + 1, copies) ^ codes(Y, seed + 1, copies)]
    rate2 = float(acc2.mean())
    return {
        "trials": trials,
        "dist1_accept_rate": float(acc1.mean()),
        "distgt1_accept_rate": rate2,
        "distgt1_sigma": math.sqrt(rate2 * (1 - rate2) / trials),
        "ci": _wilson(int(acc2.sum()), trials),
    }


# -- size benchmarks ----------------------------------------------------------------

CSV_FIELDS = (
    "family", "n", "mode", "max_bits", "mean_bits", "phase1_bits", "xor_bits",
    "phase3_bits", "baseline_bits", "kH", "kG",
)


@dataclass
class SizeReport:
    family: str
    n: int
    mode: str
    max_bits: int
    mean_bits: float
    phase1_bits: int
    xor_bits: int
    phase3_bits: int
    baseline_bits: int
    kH: int
    kG: int
    extra: dict = field(default_factory=dict, repr=False)

    def row(self) -> dict:
        out = asdict(self)
        out.pop("extra")
        return out


def knr_baseline_bits(n: int, k: int) -> int:
    """Own index plus ``k`` neighbor indices."""
    return (k + 1) * ceil_log2(n)


def family_instance(family: str, n: int) -> ProductInstance:
    if family == "hypercube":
        d = round(math.log2(n))
        if 1 << d != n:
            raise ValidationError(f"hypercube size {n} is not a power of two")
        return gen_hypercube(d)
    if family == "hamming":
        d = round(math.log(n, 3))
        if 3 ** d != n:
            raise ValidationError(f"hamming size {n} is not a power of three")
        return gen_hamming(d, 3)
    if family == "grid":
        side = math.isqrt(n)
        if side * side != n:
            raise ValidationError(f"grid size {n} is not a square")
        return gen_grid([side, side])
    raise ValidationError(f"unknown family {family!r}")


FAMILY_BASE = {"hypercube": "clique", "hamming": "clique", "grid": "path"}


def bench_sizes(
    family: str,
    n_list: Iterable[int],
    modes: Sequence[str] = ("induced",),
    seed: int = DEFAULT_SEED,
    q_mode: str = "paper",
    density: float = 0.5,
    base: str = None,
) -> list:
    """Encode each instance of ``family`` in each mode and account its label sizes."""
    base = base or FAMILY_BASE.get(family, "knr")
    reports = []
    for n in n_list:
        inst = family_instance(family, n)
        for mode in modes:
            target = inst if mode == "induced" else gen_random_sub(inst, density, seed & 0xFFFFFFFF)
            desc, labels = encode(target, mode, scheme=base, seed=seed, q_mode=q_mode)
            st = label_stats(desc, labels)
            k_g = degeneracy_order(realize(target)).k
            reports.append(
                SizeReport(
                    family, n, mode, st["max_bits"], st["mean_bits"], st["phase1_bits"],
                    st["xor_bits"], st["phase3_bits"], knr_baseline_bits(n, k_g), desc.k, k_g,
                    extra=st,
                )
            )
    return reports


def reports_to_csv(reports: Iterable[SizeReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        row = r.row()
        row["mean_bits"] = f"{row['mean_bits']:.3f}"
        writer.writerow(row)
    return buf.getvalue()


def fit_log_linear(ns: Sequence[int], bits: Sequence[float]) -> tuple:
    """Least-squares ``bits ~ a + b * log2(n)``; returns ``(a, b, max relative residual)``."""
    x = np.log2(np.asarray(ns, dtype=float))
    y = np.asarray(bits, dtype=float)
    b, a = np.polyfit(x, y, 1)
    resid = np.abs(y - (a + b * x)) / y
    return float(a), float(b), float(resid.max())
