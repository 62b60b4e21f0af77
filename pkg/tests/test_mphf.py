import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartlabel import build_mphf, deserialize_mphf, eval_mphf, serialize_mphf
from cartlabel._bits import Label
from cartlabel.exceptions import FormatError, ValidationError


def image(h, keys):
    return sorted(eval_mphf(h, x) for x in keys)


def test_single_key():
    h = build_mphf([42])
    assert eval_mphf(h, 42) == 0
    assert eval_mphf(h, 7) == 0
    assert h.bit_size <= 64


def test_empty():
    h = build_mphf([])
    assert h.k == 0 and deserialize_mphf(serialize_mphf(h)) == h


def test_seven_keys():
    keys = [3, 99, 1000, 5, 17, 123456, 8]
    assert image(build_mphf(keys, seed=2), keys) == list(range(7))


@pytest.fixture(scope="module")
def k64():
    keys = random.Random(64).sample(range(1 << 20), 64)
    return keys, build_mphf(keys, seed=5, m=1 << 20)


def test_k64_bijective_and_round_trip(k64):
    keys, h = k64
    assert image(h, keys) == list(range(64))
    bits = serialize_mphf(h)
    assert len(bits) == h.bit_size
    assert deserialize_mphf(bits) == h


def test_k1024_bits_per_key():
    keys = random.Random(1024).sample(range(1 << 20), 1024)
    h = build_mphf(keys, seed=1, m=1 << 20)
    assert image(h, keys) == list(range(1024))
    assert h.bits_per_key <= 4
    assert h.bit_size <= 4 * 1024 + 64


def test_foreign_key_in_range(k64):
    keys, h = k64
    foreign = next(x for x in range(1 << 20) if x not in set(keys))
    assert 0 <= eval_mphf(h, foreign) < 64


def test_truncated_and_padded_input(k64):
    _, h = k64
    bits = serialize_mphf(h)
    with pytest.raises(FormatError):
        deserialize_mphf(bits.slice(0, bits.length - 3))
    with pytest.raises(FormatError):
        deserialize_mphf(bits + Label(0, 1))


def test_key_validation():
    with pytest.raises(ValidationError):
        build_mphf([1, 1])
    with pytest.raises(ValidationError):
        build_mphf([5], m=4)


def test_deterministic():
    keys = list(range(0, 3000, 7))
    assert serialize_mphf(build_mphf(keys, seed=3)) == serialize_mphf(build_mphf(keys, seed=3))


@given(st.sets(st.integers(0, (1 << 20) - 1), max_size=300), st.integers(0, (1 << 16) - 1))
@settings(max_examples=150, deadline=None)
def test_bijective_property(keys, seed):
    keys = sorted(keys)
    h = build_mphf(keys, seed, m=1 << 20)
    assert image(h, keys) == list(range(len(keys)))
    assert deserialize_mphf(serialize_mphf(h)) == h
