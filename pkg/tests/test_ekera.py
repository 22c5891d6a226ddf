import numpy as np
import pytest

from hashedpf import closedform, ekera
from hashedpf.hashing import FamilySpec, LinearHash


def test_function_examples():
    inst = ekera.EHInstance.plant(23, 5, 3, dlog_bits=2)
    assert inst.x == 10
    assert ekera.eh_function(inst, 0, 0) == 1
    assert ekera.eh_function(inst, 3, 1) == 1
    assert ekera.eh_function(inst, 4, 1) == 5
    tab = inst.function_table()
    for a in range(tab.shape[0]):
        for b in range(tab.shape[1]):
            assert tab[a, b] == ekera.eh_function(inst, a, b)


def test_generators():
    assert ekera.is_generator(5, 23)
    assert ekera.is_generator(5, 103)
    assert not ekera.is_generator(2, 23)
    assert ekera.multiplicative_order(2, 23) == 11


def test_table_properties():
    inst = ekera.EHInstance.plant(23, 5, 3, dlog_bits=2)
    T = closedform.ekera_table(inst)
    assert closedform.cancellation_check(T)
    assert abs(T.total_mass() - 1) < 1e-9
    rep = closedform.scaling_verify(T, FamilySpec(inst.width, 1))
    assert rep.max_deviation < 1e-9


@pytest.mark.parametrize("p,g,d,m", [(23, 5, 3, 2), (29, 2, 5, 3), (37, 2, 4, 3)])
def test_engines_agree(p, g, d, m, rng):
    inst = ekera.EHInstance.plant(p, g, d, dlog_bits=m)
    for h in (None, LinearHash((int(rng.integers(1, 1 << inst.width)),), inst.width)):
        a = ekera.eh_distribution(inst, h, "closedform").probs
        b = ekera.eh_distribution(inst, h, "statevector").probs
        assert np.abs(a - b).max() < 1e-9


def test_recover_planted_small():
    inst = ekera.EHInstance.plant(23, 5, 3, dlog_bits=2)
    pairs = ekera.sample_pairs(inst, 30, np.random.default_rng(1))
    assert ekera.recover_d_scoring(pairs, inst) == 3


def test_recover_planted_hashed(rng):
    for d in (2, 5, 7, 11, 13):
        inst = ekera.EHInstance.plant(103, 5, d, dlog_bits=4)
        pairs = ekera.sample_pairs(inst, 30, rng, FamilySpec(inst.width, 1))
        assert ekera.recover_d_scoring(pairs, inst) == d


def test_recovery_never_reads_planted_value():
    inst = ekera.EHInstance.plant(23, 5, 3, dlog_bits=2)
    blind = ekera.EHInstance(23, 5, inst.x, 2)
    pairs = ekera.sample_pairs(blind, 30, np.random.default_rng(2))
    assert ekera.recover_d_scoring(pairs, blind) == 3


def test_zero_samples_rejected():
    with pytest.raises(ValueError):
        ekera.recover_d_scoring([], ekera.EHInstance.plant(23, 5, 3, dlog_bits=2))


@pytest.mark.parametrize("p,g,targets", [
    (23, 5, (1, 5, 10, 17, 22)),
    pytest.param(103, 5, (17, 50), marks=pytest.mark.slow),
])
def test_dlog_against_exhaustive(rng, p, g, targets):
    for target in targets:
        e = next(e for e in range(p - 1) if pow(g, e, p) == target)
        d, _ = ekera.dlog_via_eh(p, g, target, p - 1, rng)
        assert d == e


def test_ledger():
    inst = ekera.EHInstance.plant(23, 5, 3, dlog_bits=2)
    assert ekera.qubit_ledger(inst, 1) == {"input_bits": 6, "plain_total": 11, "hashed_total": 7}
