"""Distance-one labels for tuples over an arbitrary integer alphabet.

Each copy of the sketch reduces a tuple to four parity bits: coordinates are
first hashed to one bit each (per coordinate and symbol), then split into four
classes by a random map, and the bits in each class are XORed together.  Two
tuples at Hamming distance <= 1 always produce nibbles at distance <= 1; tuples
further apart do so with probability at most 15/16.  ``q`` independent copies
plus the element's own index give labels that decide "distance exactly one".
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._bits import Label, ceil_log2
from ._prf import derive_seed, prf64_np
from .exceptions import BuildError, FormatError, ValidationError

_TAG_PARTITION = 1
_TAG_SYMBOL = 2
_COPY_CHUNK = 32

DEFAULT_VERIFY_CAP = 1 << 13
DEFAULT_SAMPLE_PAIRS = 10**6

# nibble xor -> popcount <= 1
ACCEPT = np.array([bin(w).count("1") <= 1 for w in range(16)], dtype=bool)


def paper_q(n: int) -> int:
    """Copies needed for a (15/16)^q <= 1/n^2 union bound."""
    if n <= 1:
        return 0
    return math.ceil(2.0 / math.log2(16 / 15) * math.log2(n))


def adaptive_q0(n: int) -> int:
    return min(max(1, math.ceil(4 * math.log2(n))) if n > 1 else 0, paper_q(n))


# -- single copies ------------------------------------------------------------

def partition_map(seed: int, copies, d: int) -> np.ndarray:
    """Class in [4] of every coordinate, shape ``(len(copies), d)``."""
    copies = np.asarray(copies, dtype=np.uint64).reshape(-1, 1)
    coords = np.arange(d, dtype=np.uint64).reshape(1, -1)
    return (prf64_np(seed, _TAG_PARTITION, copies, coords) & np.uint64(3)).astype(np.int64)


def symbol_bits(seed: int, copies, X: np.ndarray) -> np.ndarray:
    """Bit q_j(X[x, j]) for every copy, shape ``(len(copies), n, d)``."""
    copies = np.asarray(copies, dtype=np.uint64)
    n, d = X.shape
    out = np.empty((len(copies), n, d), dtype=np.uint8)
    for j in range(d):
        symbols, inverse = np.unique(X[:, j], return_inverse=True)
        table = prf64_np(
            seed, _TAG_SYMBOL, copies.reshape(-1, 1), np.uint64(j), symbols.astype(np.uint64).reshape(1, -1)
        ) >> np.uint64(63)
        out[:, :, j] = table.astype(np.uint8)[:, inverse.reshape(-1)]
    return out


def parity_nibbles(bits: np.ndarray, pmap: np.ndarray) -> np.ndarray:
    """XOR of ``bits`` over each partition class, packed MSB-first into a nibble.

    ``bits`` has shape ``(c, n, d)`` and ``pmap`` shape ``(c, d)``; returns ``(c, n)``.
    """
    onehot = (pmap[:, :, None] == np.arange(4)[None, None, :]).astype(np.int32)
    parity = np.einsum("cnd,cdt->cnt", bits.astype(np.int32), onehot) & 1
    return (parity @ np.array([8, 4, 2, 1], dtype=np.int32)).astype(np.uint8)


def _as_tuples(S) -> np.ndarray:
    X = np.asarray(S, dtype=np.int64)
    if X.ndim == 1:
        X = X.reshape(-1, 1) if X.size else X.reshape(0, 1)
    if X.ndim != 2:
        raise ValidationError("tuples must form a 2-d array")
    return X


def binary_copy(S, seed: int, copy_index: int) -> list:
    """One sketch copy of binary tuples (no symbol hashing)."""
    X = _as_tuples(S)
    if X.size and not np.isin(X, (0, 1)).all():
        raise ValidationError("binary_copy expects 0/1 tuples")
    pmap = partition_map(seed, [copy_index], X.shape[1])
    return [int(v) for v in parity_nibbles(X[None].astype(np.uint8), pmap)[0]]


def alphabet_copy(S, seed: int, copy_index: int) -> list:
    """One sketch copy of tuples over an integer alphabet."""
    X = _as_tuples(S)
    return [int(v) for v in copy_codes(X, seed, [copy_index])[0]]


def copy_codes(X: np.ndarray, seed: int, copies) -> np.ndarray:
    """Nibbles of every tuple under every copy, shape ``(len(copies), n)``."""
    copies = np.asarray(copies, dtype=np.int64)
    n, d = X.shape
    out = np.empty((len(copies), n), dtype=np.uint8)
    for start in range(0, len(copies), _COPY_CHUNK):
        chunk = copies[start:start + _COPY_CHUNK]
        bits = symbol_bits(seed, chunk, X)
        out[start:start + len(chunk)] = parity_nibbles(bits, partition_map(seed, chunk, d))
    return out


def rowwise_codes(X: np.ndarray, seed: int, copies) -> np.ndarray:
    """Nibble of tuple ``X[t]`` under copy ``copies[t]``, shape ``(len(X),)``."""
    X = _as_tuples(X)
    t, d = X.shape
    copies = np.asarray(copies, dtype=np.uint64).reshape(-1, 1)
    coords = np.arange(d, dtype=np.uint64).reshape(1, -1)
    bits = prf64_np(seed, _TAG_SYMBOL, copies, coords, X.astype(np.uint64)) >> np.uint64(63)
    pmap = partition_map(seed, copies.reshape(-1), d)
    # one tuple per "copy": shape (t, 1, d)
    return parity_nibbles(bits.astype(np.uint8).reshape(t, 1, d), pmap)[:, 0]


def rowwise_binary_codes(X: np.ndarray, seed: int, copies) -> np.ndarray:
    """Binary-copy nibble of 0/1 tuple ``X[t]`` under copy ``copies[t]``."""
    X = _as_tuples(X)
    t, d = X.shape
    pmap = partition_map(seed, np.asarray(copies).reshape(-1), d)
    return parity_nibbles(X.astype(np.uint8).reshape(t, 1, d), pmap)[:, 0]


def nibble_accept(a: int, b: int) -> bool:
    """Per-copy test: the two nibbles differ in at most one bit."""
    return bool(ACCEPT[(a ^ b) & 15])


# -- amplified labeling -------------------------------------------------------

@dataclass(frozen=True)
class DistanceOneParams:
    n: int
    q: int
    max_retries: int = 32

    @property
    def id_bits(self) -> int:
        return ceil_log2(self.n)

    @property
    def k_bits(self) -> int:
        return 4 * self.q + self.id_bits

    @property
    def constant(self) -> float:
        """Realized ``c`` in ``k_bits <= c * log2(n)``."""
        return self.k_bits / math.log2(self.n) if self.n > 1 else 0.0

    @classmethod
    def paper(cls, n: int, max_retries: int = 32) -> "DistanceOneParams":
        return cls(n, paper_q(n), max_retries)


@dataclass(frozen=True)
class DistanceOneLabeling:
    params: DistanceOneParams
    labels: tuple
    seed: int
    attempts: int
    verified_pairs: int
    exhaustive: bool

    def decode(self, x: int, y: int) -> bool:
        return decode_distance_one(self.params, self.labels[x], self.labels[y])


def distance_one_pairs(X: np.ndarray) -> set:
    """All index pairs ``(a, b)``, ``a < b``, whose tuples differ in exactly one coordinate."""
    n, d = X.shape
    pairs = set()
    rows = [tuple(r) for r in X.tolist()]
    for j in range(d):
        groups = {}
        for idx, r in enumerate(rows):
            groups.setdefault(r[:j] + r[j + 1:], []).append(idx)
        for members in groups.values():
            for i, a in enumerate(members):
                for b in members[i + 1:]:
                    pairs.add((a, b) if a < b else (b, a))
    return pairs


def surviving_pairs(codes: np.ndarray, block_elems: int = 1 << 22, dense_copies: int = 6) -> set:
    """Pairs ``a < b`` accepted by every copy in ``codes`` (shape ``(q, n)``)."""
    q, n = codes.shape
    if n < 2:
        return set()
    if q == 0:
        return {(a, b) for a in range(n) for b in range(a + 1, n)}
    dense = min(q, dense_copies)
    rows_per_block = max(1, block_elems // n)
    cols = np.arange(n)
    out_a, out_b = [], []
    for start in range(0, n, rows_per_block):
        rows = np.arange(start, min(n, start + rows_per_block))
        ok = cols[None, :] > rows[:, None]
        for c in range(dense):
            ok &= ACCEPT[codes[c, rows][:, None] ^ codes[c][None, :]]
        a, b = np.nonzero(ok)
        out_a.append(a + start)
        out_b.append(b)
    a = np.concatenate(out_a)
    b = np.concatenate(out_b)
    for c in range(dense, q):
        if a.size == 0:
            break
        keep = ACCEPT[codes[c, a] ^ codes[c, b]]
        a, b = a[keep], b[keep]
    return set(zip(a.tolist(), b.tolist()))


def _check_codes(X: np.ndarray, codes: np.ndarray, cap: int, rng_seed: int) -> tuple:
    """Return ``(failures, pairs_checked, exhaustive)`` for a candidate sketch."""
    n = X.shape[0]
    truth = distance_one_pairs(X)
    if n <= cap:
        got = surviving_pairs(codes)
        return len(got ^ truth), n * (n - 1) // 2, True
    # sampled: every true pair plus random pairs
    rng = np.random.default_rng(rng_seed)
    a = rng.integers(0, n, DEFAULT_SAMPLE_PAIRS)
    b = rng.integers(0, n, DEFAULT_SAMPLE_PAIRS)
    keep = a != b
    a, b = a[keep], b[keep]
    if truth:
        ta, tb = map(np.array, zip(*truth))
        a, b = np.concatenate([a, ta]), np.concatenate([b, tb])
    accepted = np.ones(a.size, dtype=bool)
    for c in range(codes.shape[0]):
        accepted &= ACCEPT[codes[c, a] ^ codes[c, b]]
    exact = (X[a] != X[b]).sum(axis=1) == 1
    return int((accepted != exact).sum()), int(a.size), False


def _assemble(codes: np.ndarray, id_bits: int) -> tuple:
    q, n = codes.shape
    labels = []
    hexdigits = np.array(list("0123456789abcdef"))
    if q:
        rows = ["".join(r) for r in hexdigits[codes.T]]
    for x in range(n):
        value = int(rows[x], 16) if q else 0
        labels.append(Label((value << id_bits) | x, 4 * q + id_bits))
    return tuple(labels)


def build_distance_one(
    S,
    params: Optional[DistanceOneParams] = None,
    seed: int = 0,
    q_mode: str = "paper",
    verify_cap: int = DEFAULT_VERIFY_CAP,
) -> DistanceOneLabeling:
    """Las Vegas construction: draw, verify against exact Hamming distance, redraw.

    With ``q_mode="adaptive"`` the number of copies starts near ``4 log2 n`` and
    doubles on each failed verification until it reaches ``params.q``.
    """
    X = _as_tuples(S)
    n = X.shape[0]
    if n < 1:
        raise ValidationError("need at least one tuple")
    if len({tuple(r) for r in X.tolist()}) != n:
        raise ValidationError("tuples must be distinct")
    if params is None:
        params = DistanceOneParams.paper(n)
    if params.n != n:
        raise ValidationError(f"params are for n={params.n}, got {n} tuples")
    if q_mode not in ("paper", "adaptive"):
        raise ValidationError(f"unknown q_mode {q_mode!r}")

    schedule = []
    if q_mode == "adaptive":
        q = adaptive_q0(n)
        while q < params.q:
            schedule.append(q)
            q *= 2
    schedule += [params.q] * params.max_retries

    failures = 0
    for attempt, q in enumerate(schedule):
        attempt_seed = derive_seed(seed, "sketch", attempt)
        codes = copy_codes(X, attempt_seed, range(q))
        failures, checked, exhaustive = _check_codes(X, codes, verify_cap, attempt_seed)
        if failures == 0:
            p = DistanceOneParams(n, q, params.max_retries)
            return DistanceOneLabeling(p, _assemble(codes, p.id_bits), attempt_seed, attempt + 1, checked, exhaustive)
    raise BuildError(
        f"distance-one sketch failed verification {len(schedule)} times "
        f"({failures} wrong pairs on the last draw); raise q",
        attempts=len(schedule),
        failures=failures,
    )


@lru_cache(maxsize=64)
def _pair_masks(q: int) -> tuple:
    m1 = int("7" * q, 16) if q else 0
    m2 = int("3" * q, 16) if q else 0
    m3 = int("1" * q, 16) if q else 0
    return m1, m2, m3


def decode_distance_one(params: DistanceOneParams, label_x: Label, label_y: Label) -> bool:
    """True iff the labeled tuples are at Hamming distance exactly one."""
    k = params.k_bits
    if label_x.length != k or label_y.length != k:
        raise FormatError(f"expected {k}-bit labels, got {label_x.length} and {label_y.length}")
    return distance_one_values(params, label_x.value, label_y.value)


def distance_one_values(params: DistanceOneParams, x: int, y: int) -> bool:
    """``decode_distance_one`` on raw label values (no length checks)."""
    id_mask = (1 << params.id_bits) - 1
    if (x & id_mask) == (y & id_mask):
        return False
    w = (x ^ y) >> params.id_bits
    m1, m2, m3 = _pair_masks(params.q)
    return not ((w & (w >> 1) & m1) | (w & (w >> 2) & m2) | (w & (w >> 3) & m3))


def label_codes(params: DistanceOneParams, labels: Sequence[Label]) -> tuple:
    """Unpack labels into ``(codes (q, n), ids (n,))`` arrays for batch checks."""
    q = params.q
    n = len(labels)
    codes = np.zeros((q, n), dtype=np.uint8)
    ids = np.zeros(n, dtype=np.int64)
    id_mask = (1 << params.id_bits) - 1
    for x, lab in enumerate(labels):
        if lab.length < params.k_bits:
            raise FormatError(f"label {x} shorter than the distance-one field")
        head = lab.value >> (lab.length - params.k_bits)
        ids[x] = head & id_mask
        if q:
            codes[:, x] = np.frombuffer(
                format(head >> params.id_bits, f"0{q}x").encode(), dtype=np.uint8
            )
    if q:
        # ascii hex digit -> value
        codes = np.where(codes >= ord("a"), codes - ord("a") + 10, codes - ord("0")).astype(np.uint8)
    return codes, ids


class DistanceOneSketch(BaseEstimator):
    """Estimator wrapper: ``fit`` on an ``(n, d)`` tuple array, ``predict`` on index pairs."""

    def __init__(self, q_mode="paper", seed=0, max_retries=32, verify_cap=DEFAULT_VERIFY_CAP):
        self.q_mode = q_mode
        self.seed = seed
        self.max_retries = max_retries
        self.verify_cap = verify_cap

    def fit(self, X, y=None):
        X = _as_tuples(X)
        params = DistanceOneParams.paper(X.shape[0], self.max_retries)
        self.labeling_ = build_distance_one(X, params, self.seed, self.q_mode, self.verify_cap)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X=None):
        check_is_fitted(self, "labeling_")
        return list(self.labeling_.labels)

    def fit_transform(self, X, y=None):
        return self.fit(X).transform()

    def predict(self, pairs):
        check_is_fitted(self, "labeling_")
        lab = self.labeling_
        return np.array([lab.decode(int(a), int(b)) for a, b in np.asarray(pairs).reshape(-1, 2)], dtype=bool)
