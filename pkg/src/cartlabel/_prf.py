"""Keyed pseudorandom functions.

``prf64`` is a splitmix64-style mixer usable both on Python ints and on numpy
uint64 arrays (broadcasting), so the sketch module can evaluate millions of
(seed, copy, coordinate, symbol) cells at once.  ``prf_bits`` produces long
outputs via SHAKE-256 and is used where few, wide values are needed.
"""
from __future__ import annotations

import hashlib

import numpy as np

M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_C1 = 0xBF58476D1CE4E5B9
_C2 = 0x94D049BB133111EB


def _mix_int(z: int) -> int:
    z &= M64
    z = ((z ^ (z >> 30)) * _C1) & M64
    z = ((z ^ (z >> 27)) * _C2) & M64
    return z ^ (z >> 31)


def _mix_np(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_C1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_C2)
    return z ^ (z >> np.uint64(31))


def prf64(seed: int, *words: int) -> int:
    """64-bit PRF of ``words`` under key ``seed`` (Python ints)."""
    h = _mix_int(seed + _GOLDEN)
    for i, w in enumerate(words, 1):
        h = _mix_int(h ^ _mix_int((w & M64) + i * _GOLDEN))
    return h


def prf64_np(seed: int, *words) -> np.ndarray:
    """Vectorized ``prf64``; words broadcast against each other."""
    with np.errstate(over="ignore"):
        h = np.asarray(_mix_int(seed + _GOLDEN), dtype=np.uint64)
        for i, w in enumerate(words, 1):
            w = np.asarray(w).astype(np.uint64)
            w = _mix_np(w + np.uint64((i * _GOLDEN) & M64))
            h = _mix_np(h ^ w)
    return h


def prf_bits(seed: int, data: int, nbits: int, tag: bytes = b"") -> int:
    """An ``nbits``-bit pseudorandom integer keyed by ``seed`` on input ``data``."""
    if nbits == 0:
        return 0
    payload = tag + seed.to_bytes(8, "big") + data.to_bytes((data.bit_length() + 8) // 8, "big")
    nbytes = (nbits + 7) // 8
    raw = int.from_bytes(hashlib.shake_256(payload).digest(nbytes), "big")
    return raw >> (8 * nbytes - nbits)


def derive_seed(master: int, tag: str, *index: int) -> int:
    """Independent 64-bit subkey of ``master`` for a named purpose."""
    h = hashlib.blake2b(digest_size=8, key=master.to_bytes(8, "big"), person=b"cartlabel")
    h.update(tag.encode())
    for i in index:
        h.update(i.to_bytes(8, "big"))
    return int.from_bytes(h.digest(), "big")
