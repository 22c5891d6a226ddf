"""Check suite behind ``hashedpf verify``.

Quick checks are exact equalities at 1e-9; full checks add the seeded
statistical experiments.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import closedform, ekera, evenmansour, gfpm, moscaekert, offline, shor, simon
from .groups import GFMultiplicative, MultiplicativeModN
from .hashing import FamilySpec, sample

TOL = 1e-9
REFERENCE_N51 = {0: 0.5, 512: 0.0625, 1024: 0.125, 1536: 0.0625, 2048: 0.0,
          2560: 0.0625, 3072: 0.125, 3584: 0.0625}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  ({self.seconds:.1f}s)  {self.detail}"

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "seconds": self.seconds}


def simon_scaling(seed: int):
    worst = 0.0
    for s in range(1, 16):
        inst = simon.random_simon(4, s, seed + s)
        rep = closedform.scaling_verify(closedform.simon_table(inst.table), FamilySpec(4, 1))
        ph = rep.averaged
        target = np.where([(bin(y & s).count("1") % 2) == 0 for y in range(16)], 1 / 16, 0.0)
        target[0] = 0.5 + 1 / 16
        worst = max(worst, float(np.abs(ph - target).max()))
    return worst < TOL, f"max |p_h - expected| = {worst:.2e}"


def shor_partition(seed: int):
    inst = shor.OrderInstance(51, 2, 12)
    hashed = shor.shor_distribution(inst, shor.power_partition_hash(inst, [2, 3, 4, 7]))
    plain = shor.shor_distribution(inst)
    err = max(abs(hashed[y] - p) for y, p in REFERENCE_N51.items())
    err = max(err, abs(1 - sum(hashed[y] for y in REFERENCE_N51)))
    uni = max(abs(plain[y] - (0.125 if y % 512 == 0 else 0.0)) for y in range(4096))
    return err < TOL and uni < TOL, f"partition-hash error {err:.2e}, id-mode error {uni:.2e}"


def generic_scaling(seed: int):
    inst = shor.OrderInstance(21, 2, 9)
    T = closedform.shor_table(inst, 9)
    devs = [closedform.scaling_verify(T, FamilySpec(inst.width, t)).max_deviation for t in (1, 2)]
    return max(devs) < TOL, f"d = {inst.d}, deviations t=1: {devs[0]:.2e}, t=2: {devs[1]:.2e}"


def cancellation(seed: int):
    tables = [
        closedform.simon_table(simon.random_simon(5, 0b10110, seed).table),
        closedform.shor_table(shor.OrderInstance(51, 2, 12), 12),
        closedform.shor_table(shor.OrderInstance(21, 2, 9), 9),
        closedform.ekera_table(ekera.EHInstance.plant(23, 5, 3, dlog_bits=2)),
    ]
    worst = max(closedform.max_row_sum(T) for T in tables)
    ok = all(closedform.cancellation_check(T) for T in tables)
    return ok, f"max |row sum| over y != 0: {worst:.2e}"


def engine_equivalence(seed: int):
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    for n in (3, 4, 5, 6, 7):
        inst = simon.random_simon(n, simon.random_period(n, rng), rng)
        for h in (None, sample(FamilySpec(n, 1), rng)):
            a = simon.simon_distribution(inst, h, "closedform").probs
            b = simon.simon_distribution(inst, h, "statevector").probs
            worst = max(worst, float(np.abs(a - b).max()))
            count += 1
    for N, a_, q in ((15, 7, 6), (21, 2, 9), (51, 2, 12), (35, 3, 8), (33, 5, 10)):
        inst = shor.OrderInstance(N, a_, q)
        for h in (None, sample(FamilySpec(inst.width, 1), rng)):
            a = shor.shor_distribution(inst, h, "closedform").probs
            b = shor.shor_distribution(inst, h, "statevector").probs
            worst = max(worst, float(np.abs(a - b).max()))
            count += 1
    for p, g, d, m in ((23, 5, 3, 2), (23, 5, 2, 2), (29, 2, 5, 3), (31, 3, 6, 3), (37, 2, 4, 3)):
        inst = ekera.EHInstance.plant(p, g, d, dlog_bits=m)
        for h in (None, sample(FamilySpec(inst.width, 1), rng)):
            a = ekera.eh_distribution(inst, h, "closedform").probs
            b = ekera.eh_distribution(inst, h, "statevector").probs
            worst = max(worst, float(np.abs(a - b).max()))
            count += 1
    return worst < TOL, f"{count} instances, max difference {worst:.2e}"


def ledgers(seed: int):
    ctx = gfpm.GFContext(7, 5)
    me = moscaekert.hashed_run_qubit_ledger(GFMultiplicative(ctx), moscaekert.norm_compressor(ctx))
    lead = offline.qubit_ledger(offline.OfflineParams(96))
    ok = (
        ctx.ddh_valid
        and (ctx.q1, ctx.q2) == (2801, 3)
        and me == (16, 4)
        and lead["leading_coefficient"] == Fraction(5, 9)
        and lead["leading_coefficient_plain"] == Fraction(20, 9)
    )
    return ok, f"q1={ctx.q1} q2={ctx.q2} ME ledger {me} offline coefficients 5/9 vs 20/9"


def query_counts(seed: int):
    r1 = simon.query_statistics(6, 1, 2000, seed)
    r0 = simon.query_statistics(6, None, 2000, seed + 1)
    inst = shor.OrderInstance(51, 2, 12)
    r2 = shor.pow2_expected_queries(inst, 1, 2000, seed + 2)
    ok = (abs(r1.mean_queries - 14) <= 1.4 and abs(r0.mean_queries - 7) <= 0.7
          and r2.relative_error() <= 0.1)
    return ok, f"simon t=1 {r1.mean_queries:.2f}, id {r0.mean_queries:.2f}, shor t=1 {r2.mean_queries:.2f}"


def even_mansour(seed: int):
    rng = np.random.default_rng(seed)
    wins = 0
    for _ in range(50):
        inst = evenmansour.EMInstance.random(8, 3, rng)
        res = evenmansour.em_attack(inst, rng)
        wins += res.k == inst.k and res.wires == 9
    inst = evenmansour.EMInstance.random(8, 3, rng)
    words = np.arange(256)
    agree = np.array_equal(evenmansour.compile_em(inst).evaluate_many(words), evenmansour.em_encrypt(inst, words))
    return wins >= 45 and agree, f"{wins}/50 keys recovered, gate list agreement {agree}"


def offline_simon(seed: int):
    rng = np.random.default_rng(seed)
    params = offline.OfflineParams(6)
    wins = sum(
        offline.offline_attack(inst, params, rng).k == inst.k
        for inst in (evenmansour.EMInstance.random(6, 3, rng) for _ in range(20))
    )
    hashed, plain = offline.leading_order_qubits(96)
    ratio = hashed / plain
    return wins == 20 and ratio < Fraction(3, 10), f"{wins}/20 keys, leading-order ratio at n=96: {float(ratio):.4f}"


def mosca_ekert(seed: int):
    from scipy.stats import chisquare

    G = MultiplicativeModN(15)
    ys = moscaekert.sample_runs(G, 7, 4, 10_000, seed)
    freq = np.bincount(ys, minlength=16) / ys.size
    tv = moscaekert.qft_distribution(G, 7, 4).total_variation(freq)
    support = set(np.unique(ys).tolist()) <= {0, 4, 8, 12}
    pval = chisquare(np.bincount(ys, minlength=16)[[0, 4, 8, 12]]).pvalue
    return tv < 0.02 and support and pval > 0.01, f"TV {tv:.4f}, chi2 p {pval:.3f}"


def ddh(seed: int):
    ctx = gfpm.GFContext(7, 5)
    rng = np.random.default_rng(seed)
    g = gfpm.find_qr_generator(ctx, rng)
    acc = sum(gfpm.ddh_distinguish(ctx, *_four(gfpm.plant_ddh(ctx, g, rng, True)), rng).is_ddh for _ in range(200))
    trials = 1000
    rej = sum(not gfpm.ddh_distinguish(ctx, *_four(gfpm.plant_ddh(ctx, g, rng, False)), rng).is_ddh
              for _ in range(trials))
    rate = rej / trials
    se = math.sqrt((2 / 3) * (1 / 3) / trials)
    return acc == 200 and abs(rate - 2 / 3) <= 3 * se, f"accepted {acc}/200, reject rate {rate:.3f}"


def _four(inst):
    return inst.g, inst.ga, inst.gb, inst.gc


QUICK: list[tuple[str, Callable]] = [
    ("simon exact scaling", simon_scaling),
    ("shor partition-hash distribution", shor_partition),
    ("generic scaling", generic_scaling),
    ("cancellation criterion", cancellation),
    ("engine equivalence", engine_equivalence),
    ("exact ledgers", ledgers),
]
FULL: list[tuple[str, Callable]] = [
    ("query counts", query_counts),
    ("even-mansour attack", even_mansour),
    ("offline simon", offline_simon),
    ("mosca-ekert", mosca_ekert),
    ("ddh distinguisher", ddh),
]


def run(full: bool = False, seed: int = 0) -> list[CheckResult]:
    out = []
    for name, fn in QUICK + (FULL if full else []):
        start = time.perf_counter()
        try:
            ok, detail = fn(seed)
        except Exception as e:  # report, keep going
            ok, detail = False, f"{type(e).__name__}: {e}"
        out.append(CheckResult(name, bool(ok), detail, time.perf_counter() - start))
    return out
