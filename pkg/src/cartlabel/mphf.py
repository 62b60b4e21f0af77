"""Minimal perfect hashing by hash-and-displace.

Keys are spread over ``r = ceil(k / BUCKET_LOAD)`` buckets by a first-level
hash.  Buckets are placed largest first; each takes the smallest displacement
``d`` whose second-level positions are pairwise distinct and all still free in
``[k]``.  The displacement array is stored with an exponential-Golomb code whose
order is picked to minimize the total size.

Serialized layout (MSB-first)::

    [k: 32][tag: 2][payload]
    tag 0  k <= 1, no payload
    tag 1  [seed: 16][order: 4][r exp-Golomb displacements]
    tag 2  [key width: 6][k sorted keys]  (small key sets, when smaller)

Evaluating a key outside the build set returns an arbitrary value in ``[k]``.
"""
from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable, Optional

from ._bits import BitReader, BitWriter, Label
from ._prf import M64, _mix_int, prf64
from .exceptions import BuildError, FormatError, ValidationError

K_BITS = 32
TAG_BITS = 2
SEED_BITS = 16
ORDER_BITS = 4
WIDTH_BITS = 6
HEADER_BITS = K_BITS + TAG_BITS

TAG_TRIVIAL, TAG_DISPLACE, TAG_TABLE = 0, 1, 2
BUCKET_LOAD = 3.0
SMALL_K = 64
MAX_DISPLACEMENT = 1 << 18
MAX_SEED_RETRIES = 64

_GOLDEN = 0x9E3779B97F4A7C15


def _num_buckets(k: int) -> int:
    return max(1, math.ceil(k / BUCKET_LOAD))


def _salt(d: int) -> int:
    return _mix_int(((d + 1) * _GOLDEN) & M64)


def _position(h: int, d: int, k: int) -> int:
    return _mix_int(h ^ _salt(d)) % k


def _bucket(h: int, r: int) -> int:
    return (h >> 32) % r


@dataclass(frozen=True)
class Mphf:
    k: int
    tag: int
    seed: int = 0
    order: int = 0
    displacements: tuple = ()
    table: tuple = ()
    key_width: int = 0
    m: Optional[int] = field(default=None, compare=False)

    def __call__(self, key: int) -> int:
        return eval_mphf(self, key)

    @property
    def bit_size(self) -> int:
        return len(serialize_mphf(self))

    @property
    def bits_per_key(self) -> float:
        return self.bit_size / self.k if self.k else float(self.bit_size)


def _displace(keys: list, seed: int) -> Optional[tuple]:
    k = len(keys)
    r = _num_buckets(k)
    hashes = [prf64(seed, x) for x in keys]
    buckets = [[] for _ in range(r)]
    for h in hashes:
        buckets[_bucket(h, r)].append(h)
    order = sorted(range(r), key=lambda b: (-len(buckets[b]), b))
    taken = bytearray(k)
    disp = [0] * r
    for b in order:
        members = buckets[b]
        if not members:
            break
        for d in range(MAX_DISPLACEMENT):
            salt = _salt(d)
            pos = [_mix_int(h ^ salt) % k for h in members]
            if len(set(pos)) == len(pos) and not any(taken[p] for p in pos):
                for p in pos:
                    taken[p] = 1
                disp[b] = d
                break
        else:
            return None
    return tuple(disp)


def _best_order(disp: tuple) -> int:
    def cost(g):
        return sum(2 * ((d >> g) + 1).bit_length() - 1 + g for d in disp)

    return min(range(1 << ORDER_BITS), key=cost)


def build_mphf(keys: Iterable[int], seed: int = 0, m: Optional[int] = None) -> Mphf:
    """Minimal perfect hash of ``keys`` onto ``[len(keys)]``.

    ``seed`` picks the first 16-bit hash seed tried; on a stuck displacement
    search the next seed is used.  Empty and singleton sets are allowed.
    """
    keys = [int(x) for x in keys]
    k = len(keys)
    if len(set(keys)) != k:
        raise ValidationError("mphf keys must be distinct")
    if any(x < 0 or x > M64 for x in keys):
        raise ValidationError("mphf keys must be 64-bit non-negative integers")
    if m is not None and any(x >= m for x in keys):
        raise ValidationError(f"mphf keys must lie in [0, {m})")
    if k <= 1:
        return Mphf(k, TAG_TRIVIAL, m=m)

    candidate = None
    for attempt in range(MAX_SEED_RETRIES):
        s = (seed + attempt) & ((1 << SEED_BITS) - 1)
        disp = _displace(keys, s)
        if disp is not None:
            candidate = Mphf(k, TAG_DISPLACE, s, _best_order(disp), disp, m=m)
            break
    if k < SMALL_K:
        width = max(keys).bit_length() or 1
        if width < 1 << WIDTH_BITS:
            table = Mphf(k, TAG_TABLE, table=tuple(sorted(keys)), key_width=width, m=m)
            if candidate is None or table.bit_size < candidate.bit_size:
                return table
    if candidate is None:
        raise BuildError(f"displacement search failed for {MAX_SEED_RETRIES} seeds", attempts=MAX_SEED_RETRIES)
    return candidate


def eval_mphf(h: Mphf, key: int) -> int:
    if h.tag == TAG_TRIVIAL:
        return 0
    if h.tag == TAG_TABLE:
        return min(bisect_left(h.table, key), h.k - 1)
    x = prf64(h.seed, key & M64)
    return _position(x, h.displacements[_bucket(x, len(h.displacements))], h.k)


def write_mphf(h: Mphf, out: BitWriter) -> None:
    if h.k >> K_BITS:
        raise ValidationError("too many keys for the 32-bit count field")
    out.write(h.k, K_BITS)
    out.write(h.tag, TAG_BITS)
    if h.tag == TAG_DISPLACE:
        out.write(h.seed, SEED_BITS)
        out.write(h.order, ORDER_BITS)
        for d in h.displacements:
            out.write_expgolomb(d, h.order)
    elif h.tag == TAG_TABLE:
        out.write(h.key_width, WIDTH_BITS)
        for x in h.table:
            out.write(x, h.key_width)


def read_mphf(reader: BitReader) -> Mphf:
    k = reader.read(K_BITS)
    tag = reader.read(TAG_BITS)
    if tag == TAG_TRIVIAL:
        if k > 1:
            raise FormatError(f"trivial mphf tag with k={k}")
        return Mphf(k, TAG_TRIVIAL)
    if tag == TAG_DISPLACE:
        if k < 2:
            raise FormatError(f"displacement mphf with k={k}")
        seed = reader.read(SEED_BITS)
        order = reader.read(ORDER_BITS)
        disp = tuple(reader.read_expgolomb(order) for _ in range(_num_buckets(k)))
        return Mphf(k, TAG_DISPLACE, seed, order, disp)
    if tag == TAG_TABLE:
        width = reader.read(WIDTH_BITS)
        if k > reader.remaining:
            raise FormatError("truncated mphf key table")
        table = tuple(reader.read(width) for _ in range(k))
        return Mphf(k, TAG_TABLE, table=table, key_width=width)
    raise FormatError(f"unknown mphf format tag {tag}")


def serialize_mphf(h: Mphf) -> Label:
    out = BitWriter()
    write_mphf(h, out)
    return out.label()


def deserialize_mphf(bits: Label) -> Mphf:
    reader = BitReader(bits)
    h = read_mphf(reader)
    if reader.remaining:
        raise FormatError(f"{reader.remaining} trailing bits after mphf")
    return h
