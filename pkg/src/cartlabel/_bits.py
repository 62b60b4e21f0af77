"""Immutable bit strings and MSB-first stream helpers."""
from __future__ import annotations

from dataclasses import dataclass

from .exceptions import FormatError


def ceil_log2(n: int) -> int:
    """Smallest b with 2**b >= n (0 for n <= 1)."""
    if n <= 1:
        return 0
    return (n - 1).bit_length()


@dataclass(frozen=True, order=True)
class Label:
    """A bit string of declared length, stored as an int read MSB-first.

    Bit 0 of the string is the most significant bit of ``value``.
    """

    value: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("negative label length")
        if self.value < 0 or self.value >> self.length:
            raise ValueError(f"value does not fit in {self.length} bits")

    def __len__(self) -> int:
        return self.length

    def __add__(self, other: "Label") -> "Label":
        return Label((self.value << other.length) | other.value, self.length + other.length)

    def __xor__(self, other: "Label") -> "Label":
        if self.length != other.length:
            raise FormatError(f"xor of labels with lengths {self.length} and {other.length}")
        return Label(self.value ^ other.value, self.length)

    def bit(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.value >> (self.length - 1 - i)) & 1

    def slice(self, start: int, stop: int) -> "Label":
        if not 0 <= start <= stop <= self.length:
            raise FormatError(f"slice [{start}:{stop}] outside label of {self.length} bits")
        width = stop - start
        return Label((self.value >> (self.length - stop)) & ((1 << width) - 1), width)

    def to_str(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    @classmethod
    def from_str(cls, s: str) -> "Label":
        if s and set(s) - {"0", "1"}:
            raise FormatError(f"not a bit string: {s!r}")
        return cls(int(s, 2) if s else 0, len(s))

    def to_hex(self) -> str:
        digits = (self.length + 3) // 4
        return format(self.value, f"0{digits}x") if digits else "0"

    @classmethod
    def from_hex(cls, text: str, length: int) -> "Label":
        try:
            value = int(text, 16)
        except ValueError:
            raise FormatError(f"bad hex payload {text!r}") from None
        if value >> length:
            raise FormatError(f"hex payload {text!r} exceeds {length} bits")
        return cls(value, length)

    @classmethod
    def empty(cls) -> "Label":
        return cls(0, 0)


class BitWriter:
    def __init__(self):
        self._value = 0
        self._length = 0

    def write(self, value: int, width: int) -> None:
        if width < 0 or value < 0 or value >> width:
            raise ValueError(f"{value} does not fit in {width} bits")
        self._value = (self._value << width) | value
        self._length += width

    def write_label(self, label: Label) -> None:
        self.write(label.value, label.length)

    def write_gamma(self, value: int) -> None:
        """Elias gamma code of ``value >= 1``."""
        if value < 1:
            raise ValueError("gamma code needs a positive integer")
        nbits = value.bit_length()
        self.write(0, nbits - 1)
        self.write(value, nbits)

    def write_expgolomb(self, value: int, order: int) -> None:
        """Exponential-Golomb code of order ``order`` for ``value >= 0``."""
        self.write_gamma((value >> order) + 1)
        self.write(value & ((1 << order) - 1), order)

    def __len__(self) -> int:
        return self._length

    def label(self) -> Label:
        return Label(self._value, self._length)


class BitReader:
    def __init__(self, label: Label, pos: int = 0):
        self._label = label
        self.pos = pos

    @property
    def remaining(self) -> int:
        return self._label.length - self.pos

    def read(self, width: int) -> int:
        if width > self.remaining:
            raise FormatError(f"need {width} bits, {self.remaining} left")
        lab = self._label
        out = (lab.value >> (lab.length - self.pos - width)) & ((1 << width) - 1)
        self.pos += width
        return out

    def read_label(self, width: int) -> Label:
        return Label(self.read(width), width)

    def read_gamma(self) -> int:
        zeros = 0
        while self.read(1) == 0:
            zeros += 1
            if zeros > 64:
                raise FormatError("runaway gamma code")
        return (1 << zeros) | self.read(zeros)

    def read_expgolomb(self, order: int) -> int:
        high = self.read_gamma() - 1
        return (high << order) | self.read(order)
