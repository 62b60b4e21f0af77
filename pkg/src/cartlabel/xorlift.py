"""Turn a base labeling into an XOR-labeling.

A pseudorandom map ``phi`` sends each ``s``-bit base label to ``4s`` bits.  When
``phi(z1) ^ phi(z2)`` is distinct for every unordered pair of distinct labels in
the used set ``Z`` (and never zero), the XOR of two lifted labels identifies the
pair, so adjacency can be decided from the XOR alone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from ._bits import Label
from ._prf import derive_seed, prf_bits
from .base import BaseScheme, decode_base
from .exceptions import BuildError, UndecodableXorError, ValidationError

_PHI_TAG = b"phi"


def phi_value(lift_seed: int, z: Label) -> int:
    return prf_bits(lift_seed, z.value, 4 * z.length, tag=_PHI_TAG)


@dataclass(frozen=True)
class XorLift:
    s: int
    seed: int
    labels: tuple
    attempts: int = 1
    phi: dict = field(repr=False, compare=False, default_factory=dict)
    inverse: dict = field(repr=False, compare=False, default_factory=dict)

    @property
    def width(self) -> int:
        return 4 * self.s


def _normalize(Z: Iterable[Label]) -> tuple:
    Z = tuple(sorted(set(Z)))
    if not Z:
        raise ValidationError("lift needs at least one base label")
    widths = {z.length for z in Z}
    if len(widths) != 1:
        raise ValidationError(f"base labels have mixed widths {sorted(widths)}")
    return Z


def _try_seed(Z: tuple, lift_seed: int):
    """``(phi, inverse)`` if injective on pairs of ``Z``, else ``None``."""
    phi = {z.value: phi_value(lift_seed, z) for z in Z}
    values = [(z, phi[z.value]) for z in Z]
    inverse = {}
    for i, (z1, p1) in enumerate(values):
        for z2, p2 in values[i + 1:]:
            w = p1 ^ p2
            if w == 0 or w in inverse:
                return None
            inverse[w] = (z1, z2)
    return phi, inverse


def build_lift(Z: Iterable[Label], seed: int, max_retries: int = 32) -> XorLift:
    """Draw ``phi`` under subkeys of ``seed`` until pair injectivity holds on ``Z``."""
    Z = _normalize(Z)
    for attempt in range(max_retries):
        lift_seed = derive_seed(seed, "lift", attempt)
        found = _try_seed(Z, lift_seed)
        if found is not None:
            return XorLift(Z[0].length, lift_seed, Z, attempt + 1, *found)
    raise BuildError(f"no injective lift after {max_retries} draws", attempts=max_retries)


def rebuild_lift(Z: Iterable[Label], lift_seed: int) -> XorLift:
    """Reconstruct a lift from its recorded seed (no redraws)."""
    Z = _normalize(Z)
    found = _try_seed(Z, lift_seed)
    if found is None:
        raise UndecodableXorError("recorded lift seed is not injective on the label set")
    return XorLift(Z[0].length, lift_seed, Z, 1, *found)


def lift_label(lift: XorLift, z: Label) -> Label:
    if z.length != lift.s or z.value not in lift.phi:
        raise ValidationError(f"base label {z.to_str()!r} is not in the lift's label set")
    return Label(lift.phi[z.value], lift.width)


def xor_decode(lift: XorLift, scheme: BaseScheme, w: Union[Label, int]) -> bool:
    value = w.value if isinstance(w, Label) else w
    pair = lift.inverse.get(value)
    if pair is None:
        raise UndecodableXorError("xor of lifted labels matches no pair of base labels")
    return decode_base(scheme, *pair)
