"""Simon functions and the hashed Simon loop.

Each iteration draws a fresh hash h, runs the circuit for h o f on n + t
qubits, and keeps the measured y when it is linearly new. After n - 1
independent vectors the period is the unique nonzero vector orthogonal to all.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import closedform, qsim
from .closedform import Distribution
from .experiment import ExperimentReport, IterationCapExceeded, as_rng, trial_streams
from .f2lin import BitMatrix, BitVec, EchelonBasis, inner, nullspace_nontrivial
from .hashing import FamilySpec, sample

# constant from the analysis of the expected number of queries
QUERY_SLACK = 1.6067


@dataclass(frozen=True)
class SimonInstance:
    n: int
    s: BitVec
    table: np.ndarray

    def f(self, x: int) -> int:
        return int(self.table[x])

    def __hash__(self):
        return hash((self.n, self.s))


def random_simon(n: int, s, rng) -> SimonInstance:
    rng = as_rng(rng)
    s = s if isinstance(s, BitVec) else BitVec(int(s), n)
    if s.n != n:
        raise ValueError("period length differs from n")
    if s.is_zero():
        raise ValueError("period must be nonzero")
    reps = [x for x in range(1 << n) if x < x ^ s.value]
    values = rng.choice(1 << n, size=len(reps), replace=False)
    table = np.empty(1 << n, dtype=np.int64)
    for x, v in zip(reps, values):
        table[x] = table[x ^ s.value] = v
    table.setflags(write=False)
    return SimonInstance(n, s, table)


def random_period(n: int, rng) -> BitVec:
    return BitVec(int(as_rng(rng).integers(1, 1 << n)), n)


def verify_2to1(inst: SimonInstance) -> bool:
    s = inst.s.value
    seen: dict[int, set[int]] = {}
    for x, v in enumerate(inst.table):
        seen.setdefault(int(v), set()).add(x)
    return all(len(c) == 2 and min(c) ^ max(c) == s for c in seen.values())


def is_period(table, s: int) -> bool:
    table = np.asarray(table)
    x = np.arange(table.size)
    return bool(np.all(table == table[x ^ s]))


def _hashed_table(inst: SimonInstance, h):
    if h is None:
        return inst.table, inst.n
    return h.labels(inst.table), h.t


def simon_state(inst: SimonInstance, h=None) -> qsim.StateVector:
    table, w = _hashed_table(inst, h)
    state = qsim.StateVector.zero(qsim.RegisterLayout(inst.n, w))
    qsim.hadamard_layer(state)
    qsim.oracle_xor(state, table)
    return qsim.hadamard_layer(state)


def simon_distribution(inst: SimonInstance, h=None, engine: str = "closedform") -> Distribution:
    if engine == "closedform":
        return closedform.simon_table(inst.table, h).distribution()
    if engine == "statevector":
        tag = "plain" if h is None else "hashed"
        return Distribution(qsim.input_distribution(simon_state(inst, h)), inst.n, tag)
    raise ValueError(f"unknown engine {engine}")


def query_cap(n: int, spec: FamilySpec | None) -> int:
    t = n if spec is None or spec.identity else spec.t
    return math.ceil(64 * (n + 1) / (1 - 2.0**-t))


class _Runner:
    """One circuit execution per call. ``cached`` reuses per-hash distributions."""

    def __init__(self, inst: SimonInstance, engine: str):
        if engine not in ("statevector", "cached", "closedform"):
            raise ValueError(f"unknown engine {engine}")
        self.inst, self.engine = inst, engine
        self.cache: dict = {}

    def measure(self, h, rng) -> int:
        if self.engine == "statevector":
            state = simon_state(self.inst, h)
            y, _ = qsim.measure(state, "input", rng)
            return y.value
        key = None if h is None else h.key()
        p = self.cache.get(key)
        if p is None:
            eng = "statevector" if self.engine == "cached" else "closedform"
            p = self.cache[key] = simon_distribution(self.inst, h, eng).probs
        return qsim.sample_index(p, rng)


def hashed_simon(inst: SimonInstance, spec: FamilySpec | None, rng, engine: str = "statevector",
                 fixed_h=None, record: list | None = None, runner=None) -> tuple[BitVec, int]:
    """Recover the period; returns (s, number of circuit executions).

    ``spec=None`` or an identity spec runs the unhashed circuit. ``fixed_h``
    reuses one hash for every execution (diagnostic only).
    """
    rng = as_rng(rng)
    n = inst.n
    if spec is not None and spec.n != n:
        raise ValueError(f"hash domain {spec.n} bits, instance has {n}")
    runner = runner or _Runner(inst, engine)
    basis = EchelonBasis(n)
    cap = query_cap(n, spec)
    for queries in range(1, cap + 1):
        if fixed_h is not None:
            h = fixed_h
        elif spec is None or spec.identity:
            h = None
        else:
            h = sample(spec, rng)
        y = runner.measure(h, rng)
        if record is not None:
            record.append(y)
        basis.add(y)
        if basis.rank == n - 1:
            s = nullspace_nontrivial(BitMatrix([BitVec(v, n) for v in basis.rows()], n))
            return s, queries
    raise IterationCapExceeded(f"rank {basis.rank} < {n - 1} after {cap} executions")


def exact_expected_queries(n: int, t: int | None) -> Fraction:
    """Exact mean executions under a fresh hash per run (t=None: unhashed)."""
    half = 2 ** (n - 1)
    total = sum(Fraction(half, half - 2**i) for i in range(n - 1))
    if t is None:
        return total
    return total / (1 - Fraction(1, 2**t))


def query_statistics(n: int, t: int | None, trials: int, rng, engine: str = "cached") -> ExperimentReport:
    """Mean executions over random planted instances; ``t=None`` is the unhashed baseline."""
    spec = None if t is None else FamilySpec(n, t)
    counts, ok = [], 0
    for r in trial_streams(rng, trials):
        inst = random_simon(n, random_period(n, r), r)
        s, k = hashed_simon(inst, spec, r, engine)
        counts.append(k)
        ok += s == inst.s
    scale = 1.0 if t is None else 1.0 - 2.0**-t
    return ExperimentReport.from_counts(
        "simon-queries",
        counts,
        ok,
        (n + 1) / scale,
        rng if isinstance(rng, int) else None,
        {"n": n, "t": "id" if t is None else t, "engine": engine},
        {
            "bound": (n - 1 + QUERY_SLACK) / scale,
            "exact_expected": float(exact_expected_queries(n, t)),
            "qubits": n + (n if t is None else t),
        },
    )


def fixed_hash_frequencies(inst: SimonInstance, h, samples: int, rng) -> np.ndarray:
    """Empirical outcome frequencies with one hash held fixed (reported, not asserted)."""
    rng = as_rng(rng)
    p = simon_distribution(inst, h).probs
    draws = rng.choice(p.size, size=samples, p=p / p.sum())
    return np.bincount(draws, minlength=p.size) / samples


def orthogonal(y: int, s: BitVec) -> bool:
    return inner(BitVec(y, s.n), s) == 0
