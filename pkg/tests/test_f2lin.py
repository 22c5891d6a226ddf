import itertools

import pytest
from hypothesis import given, strategies as st

from hashedpf.f2lin import (
    BitMatrix,
    BitVec,
    DimensionError,
    NullspaceNotUnique,
    inner,
    nullspace_nontrivial,
    orthogonal_complement,
    parity,
    rank,
    span_contains,
)


def bv(s):
    return BitVec.from_str(s)


def brute_inner(x, y):
    return sum(int(a) * int(b) for a, b in zip(str(x), str(y))) % 2


def brute_span(rows, n):
    out = set()
    for coeffs in itertools.product([0, 1], repeat=len(rows)):
        v = 0
        for c, r in zip(coeffs, rows):
            if c:
                v ^= r.value
        out.add(v)
    return out


def test_bitvec_string_round_trip_msb_first():
    v = bv("1011")
    assert v.value == 0b1011 and v.n == 4
    assert str(v) == "1011"
    assert [v[i] for i in range(4)] == [1, 0, 1, 1]
    assert BitVec.from_bits([1, 0, 1, 1]) == v


def test_bitvec_rejects_bad_input():
    with pytest.raises(ValueError):
        BitVec.from_str("10a1")
    with pytest.raises(ValueError):
        BitVec(8, 3)


def test_xor_is_self_inverse():
    x, y = bv("1100"), bv("1010")
    assert x ^ y == bv("0110")
    assert (x ^ y) ^ y == x


def test_inner_examples():
    assert inner(bv("1011"), bv("1110")) == 0
    assert inner(bv("1011"), bv("0000")) == 0
    assert inner(bv("111"), bv("110")) == 0
    assert inner(bv("111"), bv("101")) == 0
    assert inner(bv("100"), bv("110")) == 1


def test_inner_length_mismatch():
    with pytest.raises(DimensionError):
        inner(bv("10"), bv("101"))


@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1), st.integers(0, 2**n - 1))))
def test_inner_matches_bitwise_definition(args):
    n, a, b = args
    x, y = BitVec(a, n), BitVec(b, n)
    assert inner(x, y) == brute_inner(x, y)
    assert inner(x, x) == x.weight() % 2


def test_rank_examples():
    assert rank(BitMatrix.from_strs(["110", "101"])) == 2
    assert rank(BitMatrix.from_strs(["000"])) == 0
    assert rank(BitMatrix.from_strs(["101", "101"])) == 1


def test_span_contains_examples():
    M = BitMatrix.from_strs(["110", "101"])
    assert span_contains(M, bv("011"))
    assert not span_contains(M, bv("111"))
    assert span_contains(BitMatrix([], 3), bv("000"))
    with pytest.raises(DimensionError):
        span_contains(M, bv("01"))


def test_nullspace_examples():
    assert nullspace_nontrivial(BitMatrix.from_strs(["110", "101"])) == bv("111")
    assert nullspace_nontrivial(BitMatrix.from_strs(["10"])) == bv("01")
    # a dependent third row does not raise the rank
    assert nullspace_nontrivial(BitMatrix.from_strs(["110", "101", "011"])) == bv("111")


def test_nullspace_requires_rank_n_minus_1():
    with pytest.raises(NullspaceNotUnique):
        nullspace_nontrivial(BitMatrix.from_strs(["100"]))
    with pytest.raises(NullspaceNotUnique):
        nullspace_nontrivial(BitMatrix.from_strs(["100", "010", "001"]))


rows_strategy = st.integers(2, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, 2**n - 1), min_size=0, max_size=8))
)


@given(rows_strategy)
def test_rank_and_span_against_enumeration(args):
    n, vals = args
    rows = [BitVec(v, n) for v in vals]
    span = brute_span(rows, n)
    M = BitMatrix(rows, n)
    assert 2 ** rank(M) == len(span)
    for y in range(2**n):
        assert span_contains(M, BitVec(y, n)) == (y in span)


@given(rows_strategy, st.randoms())
def test_rank_invariant_under_row_operations(args, rnd):
    n, vals = args
    if len(vals) < 2:
        return
    r0 = rank(BitMatrix([BitVec(v, n) for v in vals], n))
    vals = list(vals)
    rnd.shuffle(vals)
    i, j = rnd.sample(range(len(vals)), 2)
    vals[i] ^= vals[j]
    assert rank(BitMatrix([BitVec(v, n) for v in vals], n)) == r0


@given(rows_strategy)
def test_orthogonal_complement_against_brute_force(args):
    n, vals = args
    comp = orthogonal_complement(vals, n)
    expected = {s for s in range(2**n) if all(parity(s & v) == 0 for v in vals)}
    got = brute_span([BitVec(c, n) for c in comp], n)
    assert got == expected
    if len(comp) == 1:
        s = nullspace_nontrivial(BitMatrix([BitVec(v, n) for v in vals], n))
        assert all(inner(BitVec(v, n), s) == 0 for v in vals) and not s.is_zero()
