from fractions import Fraction

import numpy as np
import pytest

from hashedpf import offline
from hashedpf.evenmansour import EMInstance, em_encrypt, simeck_forward
from hashedpf.hashing import FamilySpec, sample


def test_params_n6():
    p = offline.OfflineParams(6)
    assert (p.third, p.t, p.base_copies, p.copies) == (2, 3, 10, 12)
    with pytest.raises(ValueError):
        offline.OfflineParams(7)


def test_g_table(rng):
    inst = EMInstance.random(6, 3, rng)
    oracle = offline.CountingOracle(inst)
    g = offline.build_g_table(oracle)
    assert g.size == 4 and oracle.queries == 4
    xs = np.arange(4) << 4
    assert np.array_equal(g, simeck_forward(inst, xs ^ inst.k) ^ inst.k)


def test_correct_guess_samples_orthogonal(rng):
    inst = EMInstance.random(12, 3, rng)
    g = offline.build_g_table(inst)
    rest = 8
    k1, k2 = inst.k >> rest, inst.k & ((1 << rest) - 1)
    f = offline.f_table(inst, k2)
    total = g ^ f
    if len(set(total.tolist())) != 8 or k1 == 0:
        pytest.skip("sum is not exactly 2:1")
    for _ in range(30):
        h = sample(FamilySpec(12, 4), rng)
        p = offline.copy_distribution(g, f, h)
        for y in range(16):
            if bin(y & k1).count("1") % 2:
                assert p[y] < 1e-12


def test_periodicity_test_cases():
    v = offline.periodicity_test([0b0110, 0b1100, 0b1010, 0b0000, 0b0011], 4)
    # span {0110, 1100, 0011} has rank 3, orthogonal space {1111}
    assert v.periodic and v.candidate == 0b1111
    assert not offline.periodicity_test([1, 2, 4, 8], 4).periodic
    v = offline.periodicity_test([0, 0, 0], 2)
    assert v.periodic and v.rank == 0 and v.inconclusive
    with pytest.raises(offline.NotEnoughSamples):
        offline.periodicity_test([1], 2, required=3)


def test_attack_n6():
    rng = np.random.default_rng(99)
    params = offline.OfflineParams(6)
    for _ in range(5):
        inst = EMInstance.random(6, 3, rng)
        res = offline.offline_attack(inst, params, rng)
        assert res.k == inst.k
        assert res.g_queries == 4


def test_attack_zero_key(rng):
    inst = EMInstance.random(6, 3, rng, k=0)
    assert offline.offline_attack(inst, offline.OfflineParams(6), rng).k == 0


@pytest.mark.slow
def test_attack_n12(rng):
    inst = EMInstance.random(12, 3, rng)
    assert offline.offline_attack(inst, offline.OfflineParams(12), rng).k == inst.k


def test_block_size_mismatch(rng):
    with pytest.raises(ValueError):
        offline.offline_attack(EMInstance.random(8, 3, rng), offline.OfflineParams(6), rng)


def test_ledger_n6_and_n96():
    led = offline.qubit_ledger(offline.OfflineParams(6))
    assert led["copy_width"] == 5 and led["copy_width_plain"] == 8
    assert led["per_copy_ratio"] == pytest.approx(5 / 8)
    assert led["total"] == 60 and led["total_plain"] == 80
    big = offline.qubit_ledger(offline.OfflineParams(96))
    assert big["leading_coefficient"] == Fraction(5, 9)
    assert big["leading_coefficient_plain"] == Fraction(20, 9)
    assert big["per_copy_ratio"] == pytest.approx(39 / 128)
    hashed, plain = offline.leading_order_qubits(96)
    assert hashed / plain == Fraction(1, 4)


def test_zero_fraction_formula():
    assert offline.expected_zero_fraction(6, 3) == pytest.approx(1 / 8 + 7 / 8 * 0.5)
