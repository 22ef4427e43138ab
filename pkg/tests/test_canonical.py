from __future__ import annotations

import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from infomorph.content.canonical import canonical_bytes, sha256_hex
from infomorph.errors import InvalidContent


def test_sorted_keys_and_compact_form():
    assert canonical_bytes({"b": 1, "a": 2}) == b'{"a":2,"b":1}'


def test_integral_floats_normalize_to_ints():
    assert canonical_bytes({"k": 2.0}) == canonical_bytes({"k": 2})
    assert canonical_bytes([1.0, 0.5]) == b"[1,0.5]"


def test_nan_rejected_with_path():
    with pytest.raises(InvalidContent) as err:
        canonical_bytes({"rows": [[1.0, float("nan")]]})
    assert err.value.path == "$.rows[0][1]"


def test_infinity_rejected():
    with pytest.raises(InvalidContent):
        canonical_bytes({"v": math.inf})


def test_non_string_keys_rejected():
    with pytest.raises(InvalidContent):
        canonical_bytes({1: "x"})


def test_utf8_not_ascii_escaped():
    assert canonical_bytes({"s": "부산"}) == '{"s":"부산"}'.encode("utf-8")


def test_hash_is_256_bit_hex():
    digest = sha256_hex(b"abc")
    assert len(digest) == 64
    assert digest == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


json_scalars = st.one_of(
    st.none(),
    st.booleans(),
    st.integers(min_value=-(10**12), max_value=10**12),
    st.floats(allow_nan=False, allow_infinity=False, width=64),
    st.text(max_size=40),
)
json_values = st.recursive(
    json_scalars,
    lambda children: st.one_of(
        st.lists(children, max_size=5),
        st.dictionaries(st.text(max_size=10), children, max_size=5),
    ),
    max_leaves=20,
)


@given(json_values)
def test_round_trip_fixpoint(value):
    first = canonical_bytes(value)
    again = canonical_bytes(json.loads(first.decode("utf-8")))
    assert first == again


@given(json_values)
def test_equal_values_equal_bytes(value):
    reordered = json.loads(canonical_bytes(value).decode("utf-8"))
    assert canonical_bytes(reordered) == canonical_bytes(value)
