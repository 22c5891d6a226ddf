"""Order finding over Z_N^* with hashed output registers.

The classical post-process expands y / 2^q as a continued fraction and keeps
the largest convergent denominator within the bound. Candidates from several
measurements are combined by lcm, and a run stops as soon as the combined
candidate D satisfies a^D = 1 mod N. D is then reduced to the exact order by
dividing out prime factors while the identity still holds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import closedform, qsim
from .closedform import Distribution
from .experiment import ExperimentReport, IterationCapExceeded, as_rng, trial_streams
from .gfpm import prime_factors
from .hashing import FamilySpec, partition_hash, sample, zn_width


class NotAUnit(ValueError):
    pass


def order_bruteforce(N: int, a: int) -> int:
    a %= N
    if math.gcd(a, N) != 1:
        raise NotAUnit(f"{a} is not a unit mod {N}")
    d, x = 1, a
    while x != 1 % N:
        x = x * a % N
        d += 1
    return d


@dataclass(frozen=True)
class OrderInstance:
    N: int
    a: int
    q: int

    def __post_init__(self):
        if self.N < 3:
            raise ValueError("N must be >= 3")
        if math.gcd(self.a, self.N) != 1:
            raise NotAUnit(f"{self.a} is not a unit mod {self.N}")

    @classmethod
    def make(cls, N: int, a: int, q: int | None = None) -> "OrderInstance":
        return cls(N, a, 2 * zn_width(N) if q is None else q)

    @cached_property
    def d(self) -> int:
        return order_bruteforce(self.N, self.a)

    @property
    def width(self) -> int:
        return zn_width(self.N)

    @property
    def m(self) -> int | None:
        """2^q / d when d divides 2^q."""
        return (1 << self.q) // self.d if (1 << self.q) % self.d == 0 else None

    def table(self) -> np.ndarray:
        return np.array([pow(self.a, x, self.N) for x in range(1 << self.q)], dtype=np.int64)

    def powers(self) -> list[int]:
        return [pow(self.a, k, self.N) for k in range(self.d)]


def cf_denominator(y: int, q: int, bound: int) -> int | None:
    """Largest continued-fraction convergent denominator of y / 2^q not exceeding ``bound``.

    When y / 2^q in lowest terms already has denominator <= bound this is that
    denominator. Returns None for y = 0.
    """
    Q = 1 << q
    if not 0 <= y < Q:
        raise ValueError("y out of range")
    if y == 0:
        return None
    num, den = y, Q
    k_prev, k = 1, 0  # convergent denominators q_{-2}, q_{-1}
    best = None
    while den:
        a_i, rem = divmod(num, den)
        k_prev, k = k, a_i * k + k_prev
        if k > bound:
            break
        best = k
        num, den = den, rem
    return best


def reduce_to_order(a: int, D: int, N: int) -> int:
    """Smallest divisor of D that still satisfies a^e = 1 (requires a^D = 1)."""
    for f in prime_factors(D):
        while D % f == 0 and pow(a, D // f, N) == 1:
            D //= f
    return D


def shor_state(inst: OrderInstance, h=None) -> qsim.StateVector:
    """Statevector after H-layer, oracle (h o a^x mod N) and QFT on the input register."""
    table = inst.table()
    w = inst.width
    if h is not None:
        table = h.labels(table)
        w = h.t
    state = qsim.StateVector.zero(qsim.RegisterLayout(inst.q, w))
    qsim.hadamard_layer(state)
    qsim.oracle_xor(state, table)
    return qsim.qft(state)


def shor_distribution(inst: OrderInstance, h=None, engine: str = "closedform") -> Distribution:
    if engine == "closedform":
        return closedform.shor_table(inst, inst.q, h).distribution()
    if engine == "statevector":
        return Distribution(qsim.input_distribution(shor_state(inst, h)), inst.q, "plain" if h is None else "hashed")
    raise ValueError(f"unknown engine {engine}")


def power_partition_hash(inst: OrderInstance, m0):
    """One-bit hash sending a^k mod N to 0 exactly for k in ``m0`` (other k to 1)."""
    rest = [k for k in range(inst.d) if k not in set(m0)]
    return partition_hash(inst.powers(), [sorted(m0), rest], inst.width)


class _Sampler:
    """Draws measurement outcomes, caching one distribution per distinct hash."""

    def __init__(self, inst: OrderInstance, spec: FamilySpec | None, engine: str):
        self.inst, self.spec, self.engine = inst, spec, engine
        self.cache: dict = {}
        self._plain = None

    def draw(self, rng: np.random.Generator) -> int:
        if self.spec is None or self.spec.identity:
            h = None
        else:
            h = sample(self.spec, rng)
        key = None if h is None else h.key()
        p = self.cache.get(key)
        if p is None:
            if self.engine == "closedform":
                if self._plain is None:
                    self._plain = closedform.shor_table(self.inst, self.inst.q)
                p = closedform.hash_table(self._plain, h).distribution().probs
            else:
                p = shor_distribution(self.inst, h, self.engine).probs
            self.cache[key] = p
        return qsim.sample_index(p, rng)


def _spec_for(inst: OrderInstance, t) -> FamilySpec | None:
    if t is None or t == "id":
        return None
    return FamilySpec(inst.width, int(t))


def hashed_shor(inst: OrderInstance, spec: FamilySpec | None, rng, engine: str = "closedform",
                max_queries: int = 1000, sampler=None) -> tuple[int, int]:
    """Run the hashed order-finding loop; returns (order, circuit executions)."""
    rng = as_rng(rng)
    N, a = inst.N, inst.a
    if a % N == 1:
        return 1, 0
    sampler = sampler or _Sampler(inst, spec, engine)
    D = 1
    for queries in range(1, max_queries + 1):
        y = sampler.draw(rng)
        c = cf_denominator(y, inst.q, N)
        if c is None:
            continue
        merged = math.lcm(D, c)
        D = merged if merged <= N else c
        if pow(a, D, N) == 1:
            return reduce_to_order(a, D, N), queries
    raise IterationCapExceeded(f"no order found in {max_queries} executions")


def is_odd_multiple(y: int, m: int) -> bool:
    return y % m == 0 and (y // m) % 2 == 1


def pow2_expected_queries(inst: OrderInstance, t, trials: int, rng, engine: str = "closedform",
                          max_queries: int = 10_000) -> ExperimentReport:
    """Mean executions until an odd multiple of m = 2^q/d is measured.

    ``t=None`` selects the unhashed circuit.
    """
    d = inst.d
    if d & (d - 1) or inst.m is None:
        raise ValueError(f"order {d} is not a power of two dividing 2^{inst.q}")
    spec = _spec_for(inst, t)
    sampler = _Sampler(inst, spec, engine)
    m = inst.m
    counts = []
    for r in trial_streams(rng, trials):
        for k in range(1, max_queries + 1):
            if is_odd_multiple(sampler.draw(r), m):
                counts.append(k)
                break
        else:
            raise IterationCapExceeded("no odd multiple observed")
    expected = 2.0 if spec is None else 2.0 / (1.0 - 2.0**-spec.t)
    if d == 1:
        expected = float("nan")
    return ExperimentReport.from_counts(
        "shor-pow2-queries",
        counts,
        len(counts),
        expected,
        rng if isinstance(rng, int) else None,
        {"N": inst.N, "a": inst.a, "q": inst.q, "d": d, "t": "id" if spec is None else spec.t},
    )


def order_statistics(inst: OrderInstance, t, trials: int, rng, engine: str = "closedform") -> ExperimentReport:
    spec = _spec_for(inst, t)
    sampler = _Sampler(inst, spec, engine)
    counts, ok = [], 0
    for r in trial_streams(rng, trials):
        d, k = hashed_shor(inst, spec, r, engine, sampler=sampler)
        counts.append(k)
        ok += d == inst.d
    return ExperimentReport.from_counts(
        "shor-order",
        counts,
        ok,
        None,
        rng if isinstance(rng, int) else None,
        {"N": inst.N, "a": inst.a, "q": inst.q, "t": "id" if spec is None else spec.t},
    )


def qubit_ledger(inst: OrderInstance, t) -> dict:
    plain = inst.q + inst.width
    hashed = inst.q + (inst.width if t in (None, "id") else int(t))
    return {"input_bits": inst.q, "plain_total": plain, "hashed_total": hashed}

