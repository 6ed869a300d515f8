from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from dqcount.bigcount import BigCount, BigCountError, product

nat = st.integers(min_value=0, max_value=1 << 400)


@given(nat, nat)
def test_add_mul_match_int(a, b):
    A, B = BigCount.from_int(a), BigCount.from_int(b)
    assert (A + B).to_int(None) == a + b
    assert (A * B).to_int(None) == a * b


@given(nat, nat)
def test_sub_and_order(a, b):
    A, B = BigCount.from_int(a), BigCount.from_int(b)
    assert (A < B) == (a < b)
    if a >= b:
        assert (A - B).to_int(None) == a - b
    else:
        with pytest.raises(BigCountError):
            A - B


@given(nat)
def test_exponents_are_set_bits(a):
    v = BigCount.from_int(a)
    assert v.exponents == tuple(i for i in range(a.bit_length()) if (a >> i) & 1)
    assert v == BigCount(v.exponents)
    assert hash(v) == hash(BigCount.from_int(a))


def test_bits_round_trip():
    v = BigCount.from_bits("10100101")
    assert v.exponents == (0, 2, 5, 7)
    assert BigCount((7, 5, 2, 0)) == v
    assert BigCount((3, 3)) == BigCount((4,))


def test_huge_powers_stay_sparse():
    v = BigCount.from_pow2(1 << 40) + BigCount.from_pow2(1 << 40) + BigCount.one()
    assert v.exponents == (0, (1 << 40) + 1)
    assert (v - BigCount.from_pow2(1 << 40)).exponents == (0, 1 << 40)
    assert (BigCount.from_pow2(1 << 40) ** 3).exponents == (3 << 40,)
    with pytest.raises(BigCountError):
        BigCount.from_pow2(1 << 40).to_int()


def test_json_is_sparse_above_bound():
    small = BigCount.from_int(12).to_json()
    assert small["decimal"] == "12"
    big = BigCount.from_pow2(5000).to_json()
    assert big.get("decimal") is None
    assert big["sparse"] == [5000]


def test_product_and_shift():
    assert product([BigCount.from_int(3), BigCount.from_int(5)]).to_int() == 15
    assert product([]).to_int() == 1
    assert BigCount.from_int(3).shl(4).to_int() == 48
    with pytest.raises(ValueError):
        BigCount.from_int(-1)
    with pytest.raises(ValueError):
        BigCount.from_bits("102")
