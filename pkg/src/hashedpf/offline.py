"""Offline Simon against Even-Mansour with hashed per-copy output registers.

The key splits as k = k1 || k2 with k1 the top n/3 bits. The cipher is only
queried classically, on inputs x || 0^(2n/3), giving the table g. For a guess
k' of k2 the function g(x) xor P(x || k') has period k1 exactly when k' = k2.
Each stored copy j holds sum_x |x>|h_j(g(x))>; adding h_j(P(x || k')) gives
h_j applied to the sum, because the hash is linear.

The quantum search over k' is replaced by exhaustive enumeration; it only
changes the running time, not the qubit count reported by the ledger.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import qsim
from .evenmansour import EMInstance, em_encrypt, simeck_forward
from .experiment import as_rng
from .f2lin import EchelonBasis, orthogonal_complement, span_elements
from .hashing import FamilySpec, sample

DEFAULT_C = Fraction(5, 3)


class NotEnoughSamples(ValueError):
    pass


class KeyNotFound(RuntimeError):
    pass


@dataclass(frozen=True)
class OfflineParams:
    n: int
    t: int | None = None
    c: Fraction = DEFAULT_C

    def __post_init__(self):
        if self.n % 3 or self.n < 3:
            raise ValueError("n must be a positive multiple of 3")
        if self.t is None:
            object.__setattr__(self, "t", max(1, math.ceil(math.log2(self.n))))
        object.__setattr__(self, "c", Fraction(self.c))

    @property
    def third(self) -> int:
        return self.n // 3

    @property
    def extra(self) -> float:
        """Chernoff slack n / (2 ln n); zero for n < 2."""
        return self.n / (2 * math.log(self.n)) if self.n > 1 else 0.0

    @property
    def base_copies(self) -> int:
        return math.ceil(self.c * self.n)

    @property
    def copies(self) -> int:
        return self.base_copies + math.ceil(self.extra)

    @property
    def copy_width(self) -> int:
        return self.third + self.t


class CountingOracle:
    """Classical access to EM_k with a query counter."""

    def __init__(self, em: EMInstance):
        self._em = em
        self.queries = 0

    def __call__(self, x):
        x = np.asarray(x, dtype=np.int64)
        self.queries += x.size
        return em_encrypt(self._em, x)


def build_g_table(oracle) -> np.ndarray:
    """g(x) = EM_k(x || 0^(2n/3)) for every x in the top third."""
    if isinstance(oracle, EMInstance):
        oracle = CountingOracle(oracle)
    n = oracle._em.n
    third = n // 3
    xs = np.arange(1 << third, dtype=np.int64) << (n - third)
    return oracle(xs)


def f_table(em: EMInstance, kprime: int) -> np.ndarray:
    """P(x || k') for every x in the top third (public permutation only)."""
    third = em.n // 3
    rest = em.n - third
    xs = (np.arange(1 << third, dtype=np.int64) << rest) | kprime
    return simeck_forward(em, xs)


def copy_sample(g: np.ndarray, f: np.ndarray, h, rng) -> int:
    """Measure one stored copy after adding h(f) to its hashed register."""
    third = int(g.size).bit_length() - 1
    state = qsim.StateVector.zero(qsim.RegisterLayout(third, h.t))
    qsim.hadamard_layer(state)
    qsim.oracle_xor(state, h.labels(g))
    qsim.oracle_xor(state, h.labels(f))
    qsim.hadamard_layer(state)
    y, _ = qsim.measure(state, "input", rng)
    return y.value


def copy_distribution(g: np.ndarray, f: np.ndarray, h) -> np.ndarray:
    third = int(g.size).bit_length() - 1
    state = qsim.StateVector.zero(qsim.RegisterLayout(third, h.t))
    qsim.hadamard_layer(state)
    qsim.oracle_xor(state, h.labels(g))
    qsim.oracle_xor(state, h.labels(f))
    qsim.hadamard_layer(state)
    return qsim.input_distribution(state)


@dataclass
class Verdict:
    periodic: bool
    rank: int
    candidate: int | None = None  # set when the orthogonal space is one-dimensional

    @property
    def inconclusive(self) -> bool:
        return self.periodic and self.candidate is None


def periodicity_test(samples, width: int, required: int = 0) -> Verdict:
    if len(samples) < required:
        raise NotEnoughSamples(f"{len(samples)} samples, need {required}")
    basis = EchelonBasis(width)
    for y in samples:
        basis.add(int(y))
    if basis.rank >= width:
        return Verdict(False, basis.rank)
    comp = orthogonal_complement(basis.rows(), width)
    return Verdict(True, basis.rank, comp[0] if len(comp) == 1 else None)


@dataclass
class OfflineResult:
    k: int
    guesses: int
    g_queries: int
    verify_queries: int
    bad: bool  # fewer than c*n nonzero samples at the correct guess
    zero_fraction: float
    samples: list = field(default_factory=list)


def _verify(oracle, em: EMInstance, cand: int, xs) -> bool:
    return bool(np.all(oracle(xs) == (simeck_forward(em, xs ^ cand) ^ cand)))


def offline_attack(em: EMInstance, params: OfflineParams, rng, verify_points: int = 8) -> OfflineResult:
    if em.n != params.n:
        raise ValueError("parameter n differs from the cipher block size")
    rng = as_rng(rng)
    n, third = params.n, params.third
    rest = n - third
    oracle = CountingOracle(em)
    g = build_g_table(oracle)
    g_queries = oracle.queries
    spec = FamilySpec(n, params.t)
    hashes = [sample(spec, rng) for _ in range(params.copies)]
    xs = rng.integers(0, 1 << n, size=verify_points, dtype=np.int64)
    verify_q = 0
    for guess, kprime in enumerate(range(1 << rest), start=1):
        f = f_table(em, kprime)
        ys = [copy_sample(g, f, h, rng) for h in hashes]
        v = periodicity_test(ys, third, params.copies)
        if not v.periodic:
            continue
        cands = [v.candidate] if v.candidate is not None else span_elements(
            orthogonal_complement([int(y) for y in ys], third)
        )
        for k1 in cands:
            key = (k1 << rest) | kprime
            before = oracle.queries
            ok = _verify(oracle, em, key, xs)
            verify_q += oracle.queries - before
            if ok:
                nonzero = sum(1 for y in ys if y)
                return OfflineResult(
                    key,
                    guess,
                    g_queries,
                    verify_q,
                    nonzero < params.base_copies,
                    1 - nonzero / len(ys),
                    ys,
                )
    raise KeyNotFound("no guess produced a confirmed key")


def expected_zero_fraction(n: int, t: int) -> float:
    """Leading-order chance of measuring y = 0 at the correct guess."""
    return 2.0**-t + (1 - 2.0**-t) * 2.0 ** (1 - n // 3)


def qubit_ledger(params: OfflineParams) -> dict:
    n, third = params.n, params.third
    hashed_copy = third + params.t
    plain_copy = third + n
    hashed_total = params.copies * hashed_copy
    plain_total = params.base_copies * plain_copy
    c = params.c
    return {
        "n": n,
        "t": params.t,
        "copies": params.copies,
        "copies_plain": params.base_copies,
        "copy_width": hashed_copy,
        "copy_width_plain": plain_copy,
        "per_copy_ratio": hashed_copy / plain_copy,
        "total": hashed_total,
        "total_plain": plain_total,
        "total_ratio": hashed_total / plain_total,
        "leading_coefficient": c * Fraction(1, 3),
        "leading_coefficient_plain": c * Fraction(4, 3),
        "leading_ratio": Fraction(1, 4),
    }


def leading_order_qubits(n: int, c: Fraction = DEFAULT_C) -> tuple[Fraction, Fraction]:
    """(c/3) n^2 hashed against (4c/3) n^2 unhashed."""
    c = Fraction(c)
    return c / 3 * n * n, 4 * c / 3 * n * n
