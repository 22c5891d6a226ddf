"""The ten end-to-end acceptance criteria.

Each criterion prints one PASS/FAIL line. Run directly with
``python tests/test_acceptance.py`` for the lines alone.
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import chisquare

from hashedpf import closedform, ekera, evenmansour, gfpm, moscaekert, offline, shor, simon
from hashedpf.groups import GFMultiplicative, MultiplicativeModN
from hashedpf.hashing import FamilySpec, enumerate_family, sample

TOL = 1e-9
SEED = 20240601
REFERENCE = {0: 0.5, 512: 0.0625, 1024: 0.125, 1536: 0.0625, 2048: 0.0,
             2560: 0.0625, 3072: 0.125, 3584: 0.0625}


def simon_exact_scaling():
    """n=4, every s, average over all 16 one-bit hashes, statevector engine."""
    worst = 0.0
    for s in range(1, 16):
        inst = simon.random_simon(4, s, SEED + s)
        avg = np.zeros(16)
        members = list(enumerate_family(FamilySpec(4, 1)))
        for h in members:
            avg += simon.simon_distribution(inst, h, "statevector").probs
        avg /= len(members)
        for y in range(16):
            if y == 0:
                target = 0.5 + 1 / 16
            else:
                target = 1 / 16 if bin(y & s).count("1") % 2 == 0 else 0.0
            worst = max(worst, abs(avg[y] - target))
    return worst < TOL, f"max deviation {worst:.1e} over 15 periods", 5


def shor_reference_distribution():
    inst = shor.OrderInstance(51, 2, 12)
    h = shor.power_partition_hash(inst, [2, 3, 4, 7])
    err = 0.0
    for engine in ("closedform", "statevector"):
        p = shor.shor_distribution(inst, h, engine)
        err = max(err, max(abs(p[y] - v) for y, v in REFERENCE.items()))
        err = max(err, abs(1 - sum(p[y] for y in REFERENCE)))
    plain = shor.shor_distribution(inst, None, "statevector").probs
    uniform = np.where(np.arange(4096) % 512 == 0, 0.125, 0.0)
    uni = float(np.abs(plain - uniform).max())
    return err < TOL and uni < TOL, f"hashed error {err:.1e}, unhashed error {uni:.1e}", 10


def generic_scaling():
    inst = shor.OrderInstance(21, 2, 9)
    assert inst.d == 6
    T = closedform.shor_table(inst, 9)
    p = T.distribution().probs
    devs = []
    for t in (1, 2):
        spec = FamilySpec(inst.width, t)
        avg = np.zeros_like(p)
        count = 0
        for h in enumerate_family(spec):
            avg += closedform.hash_table(T, h).distribution().probs
            count += 1
        assert count == 2 ** (inst.width * t)
        avg /= count
        devs.append(float(np.abs(avg[1:] - (1 - 2.0**-t) * p[1:]).max()))
        devs.append(closedform.scaling_verify(T, spec).max_deviation)
    worst = max(devs)
    return worst < TOL, f"d=6, max deviation {worst:.1e} for t=1,2", 120


def cancellation():
    tables = {
        "simon": closedform.simon_table(simon.random_simon(6, 0b101101, SEED).table),
        "shor": closedform.shor_table(shor.OrderInstance(21, 2, 9), 9),
        "ekera": closedform.ekera_table(ekera.EHInstance.plant(23, 5, 3, dlog_bits=2)),
    }
    worst = 0.0
    ok = True
    for T in tables.values():
        worst = max(worst, float(np.abs(T.W.sum(axis=1)[1:]).max()))
        ok &= closedform.cancellation_check(T)
    return ok and worst < TOL, f"max |row sum| for y != 0: {worst:.1e}", 10


def engine_equivalence():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    per_family = {"simon": 0, "shor": 0, "ekera": 0}
    for n in (3, 4, 5, 6, 7):
        inst = simon.random_simon(n, simon.random_period(n, rng), rng)
        for h in (None, sample(FamilySpec(n, 1), rng)):
            a = simon.simon_distribution(inst, h, "closedform").probs
            b = simon.simon_distribution(inst, h, "statevector").probs
            worst = max(worst, float(np.abs(a - b).max()))
            per_family["simon"] += 1
    for N, a_, q in ((15, 7, 6), (21, 2, 9), (51, 2, 12), (35, 3, 8), (33, 5, 10)):
        inst = shor.OrderInstance(N, a_, q)
        assert q + inst.width <= 20
        for h in (None, sample(FamilySpec(inst.width, 1), rng)):
            a = shor.shor_distribution(inst, h, "closedform").probs
            b = shor.shor_distribution(inst, h, "statevector").probs
            worst = max(worst, float(np.abs(a - b).max()))
            per_family["shor"] += 1
    for p, g, d, m in ((23, 5, 3, 2), (23, 5, 2, 2), (29, 2, 5, 3), (31, 3, 6, 3), (37, 2, 4, 3)):
        inst = ekera.EHInstance.plant(p, g, d, dlog_bits=m)
        assert inst.input_bits + inst.width <= 20
        for h in (None, sample(FamilySpec(inst.width, 1), rng)):
            a = ekera.eh_distribution(inst, h, "closedform").probs
            b = ekera.eh_distribution(inst, h, "statevector").probs
            worst = max(worst, float(np.abs(a - b).max()))
            per_family["ekera"] += 1
    ok = worst < TOL and min(per_family.values()) >= 5
    return ok, f"{per_family}, max difference {worst:.1e}", 60


def query_counts():
    r1 = simon.query_statistics(6, 1, 2000, SEED)
    r0 = simon.query_statistics(6, None, 2000, SEED + 1)
    r2 = shor.pow2_expected_queries(shor.OrderInstance(51, 2, 12), 1, 2000, SEED + 2)
    ok = (
        abs(r1.mean_queries - 14) <= 1.4
        and abs(r0.mean_queries - 7) <= 0.7
        and abs(r2.mean_queries - 4) <= 0.4
        and r1.success_probability == r0.success_probability == 1.0
    )
    detail = (f"simon t=1 {r1.mean_queries:.2f} (target 14), unhashed {r0.mean_queries:.2f} (target 7), "
              f"shor t=1 {r2.mean_queries:.3f} (target 4)")
    return ok, detail, 120


def even_mansour():
    rng = np.random.default_rng(SEED)
    wins = 0
    wires = set()
    for _ in range(50):
        inst = evenmansour.EMInstance.random(8, 3, rng)
        try:
            res = evenmansour.em_attack(inst, rng)
        except evenmansour.AttackFailed:
            continue
        wins += res.k == inst.k
        wires.add(res.wires)
    inst = evenmansour.EMInstance.random(8, 3, rng)
    words = np.arange(256)
    agree = np.array_equal(evenmansour.compile_em(inst).evaluate_many(words), evenmansour.em_encrypt(inst, words))
    agree &= np.array_equal(evenmansour.compile_simeck(inst).evaluate_many(words),
                            evenmansour.simeck_forward(inst, words))
    ok = wins / 50 >= 0.9 and wires == {9} and agree
    return ok, f"{wins}/50 keys, wires {sorted(wires)}, gate list agrees on 256 words: {agree}", 120


def offline_simon():
    rng = np.random.default_rng(SEED)
    params = offline.OfflineParams(6)
    wins = 0
    for _ in range(20):
        inst = evenmansour.EMInstance.random(6, 3, rng)
        wins += offline.offline_attack(inst, params, rng).k == inst.k
    small = offline.qubit_ledger(params)
    per_copy = Fraction(6 // 3 + math.ceil(math.log2(6)), 6 // 3 + 6)
    big = offline.qubit_ledger(offline.OfflineParams(96))
    hashed, plain = offline.leading_order_qubits(96)
    ok = (
        wins == 20
        and small["per_copy_ratio"] == float(per_copy)
        and big["leading_coefficient"] == Fraction(5, 9)
        and big["leading_coefficient_plain"] == Fraction(20, 9)
        and hashed / plain < Fraction(3, 10)
    )
    detail = (f"{wins}/20 keys; n=6 per-copy ratio {per_copy}; n=96 leading-order "
              f"{big['leading_coefficient']} n^2 vs {big['leading_coefficient_plain']} n^2 "
              f"= {float(hashed / plain):.4f}; finite n=96 per-copy {big['per_copy_ratio']:.4f}, "
              f"total {big['total_ratio']:.4f}")
    return ok, detail, 180


def mosca_ekert():
    G = MultiplicativeModN(15)
    ys = moscaekert.sample_runs(G, 7, 4, 10_000, SEED)
    counts = np.bincount(ys, minlength=16)
    tv = moscaekert.qft_distribution(G, 7, 4).total_variation(counts / counts.sum())
    support = set(np.flatnonzero(counts).tolist()) <= {0, 4, 8, 12}
    pval = chisquare(counts[[0, 4, 8, 12]]).pvalue
    return tv < 0.02 and support and pval > 0.01, f"TV {tv:.4f}, chi-square p {pval:.3f}", 60


def _trial_division(n):
    return n > 1 and all(n % d for d in range(2, math.isqrt(n) + 1))


def ddh():
    ctx = gfpm.GFContext(7, 5)
    rng = np.random.default_rng(SEED)
    params_ok = (ctx.q1, ctx.q2) == (2801, 3) and _trial_division(2801) and _trial_division(3)
    hom = all(
        gfpm.norm(ctx, gfpm.gf_mul(ctx, x, y)) == gfpm.norm(ctx, x) * gfpm.norm(ctx, y) % 7
        for x, y in ((ctx.random_nonzero(rng), ctx.random_nonzero(rng)) for _ in range(1000))
    )
    g = gfpm.find_qr_generator(ctx, rng)
    ga = gfpm.gf_pow(ctx, g, int(rng.integers(1, 2801 * 3)))
    hg, ha = gfpm.norm(ctx, g), gfpm.norm(ctx, ga)
    grid = all(
        gfpm.norm(ctx, gfpm.ddh_function(ctx, g, ga, x, y)) == pow(hg, x, 7) * pow(ha, y, 7) % 7
        for x in range(16) for y in range(16)
    )

    def verdict(planted):
        inst = gfpm.plant_ddh(ctx, g, rng, planted)
        return gfpm.ddh_distinguish(ctx, inst.g, inst.ga, inst.gb, inst.gc, rng).is_ddh

    accepted = sum(verdict(True) for _ in range(200))
    trials = 1000
    rate = sum(not verdict(False) for _ in range(trials)) / trials
    se = math.sqrt((2 / 3) * (1 / 3) / trials)
    led = gfpm.qubit_ledger(ctx)
    me_led = moscaekert.hashed_run_qubit_ledger(GFMultiplicative(ctx), moscaekert.norm_compressor(ctx))
    ledger_ok = (led["plain_total"], led["hashed_total"]) == (1 + 15, 1 + 3) and me_led == (16, 4)
    ok = params_ok and hom and grid and accepted == 200 and abs(rate - 2 / 3) <= 3 * se and ledger_ok
    detail = (f"q1=2801 q2=3 prime: {params_ok}, norm homomorphic: {hom}, grid identity: {grid}, "
              f"accepted {accepted}/200, reject rate {rate:.3f} (2/3 +- {3 * se:.3f}), ledger (1+15) vs (1+3)")
    return ok, detail, 120


CRITERIA = [
    (1, "simon exact scaling", simon_exact_scaling),
    (2, "shor reference distribution", shor_reference_distribution),
    (3, "generic scaling", generic_scaling),
    (4, "cancellation criterion", cancellation),
    (5, "engine equivalence", engine_equivalence),
    (6, "query counts", query_counts),
    (7, "even-mansour end to end", even_mansour),
    (8, "offline simon and ledger", offline_simon),
    (9, "semiclassical period finding", mosca_ekert),
    (10, "ddh distinguisher", ddh),
]


def evaluate(fn):
    start = time.perf_counter()
    ok, detail, limit = fn()
    elapsed = time.perf_counter() - start
    return bool(ok) and elapsed < limit, detail, elapsed, limit


def line(num, name, ok, detail, elapsed, limit):
    return f"{'PASS' if ok else 'FAIL'} criterion {num:2d} {name}: {detail} [{elapsed:.1f}s / {limit}s]"


@pytest.mark.parametrize("num,name,fn", CRITERIA, ids=[c[1].replace(" ", "_") for c in CRITERIA])
def test_criterion(num, name, fn, capsys):
    ok, detail, elapsed, limit = evaluate(fn)
    with capsys.disabled():
        print("\n" + line(num, name, ok, detail, elapsed, limit))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for num, name, fn in CRITERIA:
        ok, detail, elapsed, limit = evaluate(fn)
        results.append(ok)
        print(line(num, name, ok, detail, elapsed, limit), flush=True)
    print(f"{sum(results)}/{len(results)} criteria passed")
