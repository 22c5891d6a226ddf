from fractions import Fraction

import numpy as np
import pytest

from hashedpf import simon
from hashedpf.experiment import IterationCapExceeded
from hashedpf.f2lin import BitVec
from hashedpf.hashing import FamilySpec, LinearHash


def test_random_simon_n3():
    inst = simon.random_simon(3, BitVec.from_str("001"), 0)
    f = inst.table
    assert f[0] == f[1] and f[2] == f[3]
    assert len({int(f[0]), int(f[2]), int(f[4]), int(f[6])}) == 4


def test_two_to_one_many(rng):
    for _ in range(100):
        n = int(rng.integers(2, 8))
        inst = simon.random_simon(n, simon.random_period(n, rng), rng)
        assert simon.verify_2to1(inst)
        assert simon.is_period(inst.table, inst.s.value)


def test_random_simon_rejects_zero_period():
    with pytest.raises(ValueError):
        simon.random_simon(3, 0, 0)


def test_support_is_orthogonal(rng):
    inst = simon.random_simon(3, 0b001, rng)
    p = simon.simon_distribution(inst, engine="statevector").probs
    for y in range(8):
        assert (p[y] > 1e-12) == (y & 1 == 0)
        if y & 1 == 0:
            assert abs(p[y] - 0.25) < 1e-9


@pytest.mark.parametrize("n", [3, 4, 5])
def test_engines_agree(rng, n):
    inst = simon.random_simon(n, simon.random_period(n, rng), rng)
    for h in (None, LinearHash((int(rng.integers(1, 1 << n)),), n)):
        a = simon.simon_distribution(inst, h, "closedform").probs
        b = simon.simon_distribution(inst, h, "statevector").probs
        assert np.abs(a - b).max() < 1e-9


def test_recovers_planted_period_n3():
    inst = simon.random_simon(3, 0b001, 42)
    s, q = simon.hashed_simon(inst, FamilySpec(3, 1), np.random.default_rng(42))
    assert s == BitVec.from_str("001") and q >= 2


@pytest.mark.parametrize("engine", ["statevector", "cached", "closedform"])
def test_recovers_planted_period_all_engines(engine, rng):
    for _ in range(10):
        inst = simon.random_simon(5, simon.random_period(5, rng), rng)
        s, _ = simon.hashed_simon(inst, FamilySpec(5, 2), rng, engine)
        assert s == inst.s


def test_record_holds_orthogonal_samples(rng):
    inst = simon.random_simon(6, simon.random_period(6, rng), rng)
    rec = []
    _, q = simon.hashed_simon(inst, FamilySpec(6, 1), rng, record=rec)
    assert len(rec) == q
    assert all(simon.orthogonal(y, inst.s) for y in rec)


def test_fixed_hash_zero_seed_hits_cap(rng):
    inst = simon.random_simon(3, 0b011, rng)
    with pytest.raises(IterationCapExceeded):
        simon.hashed_simon(inst, FamilySpec(3, 1), rng, fixed_h=LinearHash((0,), 3))


def test_exact_expected_queries_small():
    # n = 2: one useful sample, probability of y != 0 is 1/2 (id) or 1/4 (t = 1)
    assert simon.exact_expected_queries(2, None) == 2
    assert simon.exact_expected_queries(2, 1) == 4
    assert simon.exact_expected_queries(6, 1) == 2 * simon.exact_expected_queries(6, None)
    assert simon.exact_expected_queries(3, None) == Fraction(2) + Fraction(4, 3)


def test_query_mean_t1_n6():
    rep = simon.query_statistics(6, 1, 2000, 11)
    assert rep.success_probability == 1.0
    assert abs(rep.mean_queries - 14) <= 1.4
    assert rep.mean_queries <= (6 - 1 + simon.QUERY_SLACK) / 0.5 + 3 * rep.stderr


def test_query_mean_t3_n6():
    rep = simon.query_statistics(6, 3, 2000, 12)
    assert abs(rep.mean_queries - 7 / (7 / 8)) <= 0.1 * 8


def test_query_mean_unhashed_n6():
    rep = simon.query_statistics(6, None, 2000, 13)
    assert rep.mean_queries <= 7 + 3 * rep.stderr
    assert abs(rep.mean_queries - 7) <= 0.7


def test_fixed_hash_frequencies_sum_to_one(rng):
    inst = simon.random_simon(4, 0b1010, rng)
    freq = simon.fixed_hash_frequencies(inst, LinearHash((0b0110,), 4), 500, rng)
    assert abs(freq.sum() - 1) < 1e-12
