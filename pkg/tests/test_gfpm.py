import math

import numpy as np
import pytest

from hashedpf import gfpm
from hashedpf.gfpm import GFContext, gf_mul, gf_pow, norm


@pytest.fixture(scope="module")
def f75():
    return GFContext(7, 5)


def trial_division_prime(n):
    return n > 1 and all(n % d for d in range(2, math.isqrt(n) + 1))


def test_field_axioms(f75, rng):
    one = f75.one
    for _ in range(50):
        a, b, c = (f75.random_nonzero(rng) for _ in range(3))
        assert gf_mul(f75, a, one) == a
        assert gf_mul(f75, gf_mul(f75, a, b), c) == gf_mul(f75, a, gf_mul(f75, b, c))
        assert gf_mul(f75, a, gf_pow(f75, a, -1)) == one
        e1, e2 = (int(v) for v in rng.integers(0, 10_000, size=2))
        assert gf_mul(f75, gf_pow(f75, a, e1), gf_pow(f75, a, e2)) == gf_pow(f75, a, e1 + e2)
    a = f75.random_nonzero(rng)
    assert gf_pow(f75, a, f75.order - 1) == one


def test_code_table_multiplication_matches_polynomials(f75, rng):
    for _ in range(200):
        a, b = f75.random_nonzero(rng), f75.random_nonzero(rng)
        assert int(f75.mul_codes(a.code, b.code)) == gf_mul(f75, a, b).code


def test_norm(f75, rng):
    assert norm(f75, f75.one) == 1
    for _ in range(1000):
        x, y = f75.random_nonzero(rng), f75.random_nonzero(rng)
        assert norm(f75, gf_mul(f75, x, y)) == norm(f75, x) * norm(f75, y) % 7
    for c in range(1, 7):
        assert norm(f75, f75.scalar(c)) == pow(c, 5, 7)


def test_ddh_parameters(f75):
    assert (f75.q1, f75.q2) == (2801, 3)
    assert trial_division_prime(2801) and trial_division_prime(3)
    found = gfpm.find_ddh_params(7, 5)
    assert (7, 5) in found and (7, 3) not in found
    assert GFContext(7, 3).q1 == 57 == 3 * 19
    assert all(p % 2 for p, _ in found)


def test_mixed_contexts():
    with pytest.raises(gfpm.MixedContextError):
        gf_mul(GFContext(7, 2), GFContext(7, 3).one, GFContext(7, 3).one)


def test_hashed_function_identity(f75, rng):
    g = gfpm.find_qr_generator(f75, rng)
    ga = gf_pow(f75, g, 1234)
    hg, ha = norm(f75, g), norm(f75, ga)
    for x in range(16):
        for y in range(16):
            lhs = norm(f75, gfpm.ddh_function(f75, g, ga, x, y))
            assert lhs == pow(hg, x, 7) * pow(ha, y, 7) % 7


def test_qr_generator_order(f75, rng):
    g = gfpm.find_qr_generator(f75, rng)
    assert gfpm.element_order(f75, g) == 2801 * 3


def test_planted_accepted(f75):
    rng = np.random.default_rng(5)
    g = gfpm.find_qr_generator(f75, rng)
    for _ in range(20):
        inst = gfpm.plant_ddh(f75, g, rng, True)
        v = gfpm.ddh_distinguish(f75, inst.g, inst.ga, inst.gb, inst.gc, rng)
        assert v.is_ddh and v.label == "DDH"


@pytest.mark.slow
def test_random_rejection_rate(f75):
    rng = np.random.default_rng(6)
    g = gfpm.find_qr_generator(f75, rng)
    trials = 1000
    rej = sum(
        not gfpm.ddh_distinguish(f75, i.g, i.ga, i.gb, i.gc, rng).is_ddh
        for i in (gfpm.plant_ddh(f75, g, rng, False) for _ in range(trials))
    )
    se = math.sqrt(2 / 9 / trials)
    assert abs(rej / trials - 2 / 3) <= 3 * se


def test_ledger(f75):
    led = gfpm.qubit_ledger(f75)
    assert (led["plain_total"], led["hashed_total"]) == (16, 4)
