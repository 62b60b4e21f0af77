"""Input checks in the spirit of ``sklearn.utils.validation``."""
from __future__ import annotations

import numpy as np

from .exceptions import ValidationError
from .graph import ProductInstance

MODES = ("induced", "subgraph")
Q_MODES = ("paper", "adaptive")


def check_seed(seed) -> int:
    """Accept an int or a hex string; return a 64-bit unsigned int."""
    if isinstance(seed, str):
        try:
            seed = int(seed, 16)
        except ValueError:
            raise ValidationError(f"seed {seed!r} is not hex") from None
    if isinstance(seed, (bool, float)) or not isinstance(seed, (int, np.integer)):
        raise ValidationError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed < 1 << 64:
        raise ValidationError("seed must fit in 64 unsigned bits")
    return seed


def check_instance(instance, mode: str = None) -> ProductInstance:
    if not isinstance(instance, ProductInstance):
        raise ValidationError(f"expected a ProductInstance, got {type(instance).__name__}")
    if mode is not None:
        if mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {mode!r}")
        if mode == "subgraph" and instance.induced:
            raise ValidationError("subgraph mode needs an instance with an explicit edge list")
        if mode == "induced" and not instance.induced:
            raise ValidationError("induced mode needs an induced instance; use subgraph mode for explicit edges")
    return instance


def check_q_mode(q_mode: str) -> str:
    if q_mode not in Q_MODES:
        raise ValidationError(f"q_mode must be one of {Q_MODES}, got {q_mode!r}")
    return q_mode


def check_pairs(pairs, n: int) -> np.ndarray:
    arr = np.asarray(pairs, dtype=np.int64)
    if arr.size == 0:
        return arr.reshape(0, 2)
    arr = arr.reshape(-1, 2) if arr.ndim == 1 else arr
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError("pairs must have shape (m, 2)")
    if arr.min() < 0 or arr.max() >= n:
        raise ValidationError(f"pair index out of range for n={n}")
    return arr
