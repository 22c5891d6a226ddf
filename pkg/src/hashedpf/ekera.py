"""Short discrete logarithms: the two-register state for f(a, b) = g^a * x^-b.

Registers: ``a`` has dlog_bits + step_bits wires, ``b`` has step_bits wires.
Outcome rows are indexed y = j * 2^step_bits + k.

The lattice post-process is replaced by exhaustive candidate scoring: a
candidate d' scores well when (d' j + 2^m k) mod 2^(m+l) sits near 0 for the
observed pairs. The best-scoring candidate that satisfies g^d' = x wins.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import closedform, qsim
from .closedform import Distribution
from .experiment import as_rng
from .hashing import FamilySpec, sample, zn_width

LOWMEM_CELLS = 1 << 22


class NoCandidate(RuntimeError):
    pass


def multiplicative_order(g: int, p: int) -> int:
    if math.gcd(g, p) != 1:
        raise ValueError(f"{g} is not invertible mod {p}")
    e, x = 1, g % p
    while x != 1 % p:
        x = x * g % p
        e += 1
    return e


def is_generator(g: int, p: int) -> bool:
    return multiplicative_order(g, p) == p - 1


@dataclass(frozen=True)
class EHInstance:
    p: int  # group modulus
    g: int
    x: int
    dlog_bits: int
    tradeoff: int = 1
    d: int | None = None  # planted answer, unused by recovery

    def __post_init__(self):
        if self.dlog_bits < 1 or self.tradeoff < 1:
            raise ValueError("dlog_bits and tradeoff must be >= 1")
        if math.gcd(self.x, self.p) != 1 or math.gcd(self.g, self.p) != 1:
            raise ValueError("g and x must be invertible")

    @classmethod
    def plant(cls, p: int, g: int, d: int, tradeoff: int = 1, dlog_bits: int | None = None) -> "EHInstance":
        if d < 0:
            raise ValueError("d must be non-negative")
        bits = dlog_bits or max(1, d.bit_length())
        if d >= 1 << bits:
            raise ValueError(f"d = {d} does not fit in {bits} bits")
        return cls(p, g % p, pow(g, d, p), bits, tradeoff, d)

    @property
    def step_bits(self) -> int:
        return math.ceil(self.dlog_bits / self.tradeoff)

    @property
    def input_bits(self) -> int:
        return self.dlog_bits + 2 * self.step_bits

    @property
    def width(self) -> int:
        return zn_width(self.p)

    def function_table(self) -> np.ndarray:
        """f(a, b) as a (2^(m+l), 2^l) array."""
        A = 1 << (self.dlog_bits + self.step_bits)
        B = 1 << self.step_bits
        ga = np.array([pow(self.g, a, self.p) for a in range(A)], dtype=np.int64)
        xinv = pow(self.x, -1, self.p)
        xb = np.array([pow(xinv, b, self.p) for b in range(B)], dtype=np.int64)
        return (ga[:, None] * xb[None, :]) % self.p

    def split(self, y: int) -> tuple[int, int]:
        return y >> self.step_bits, y & ((1 << self.step_bits) - 1)


def eh_function(inst: EHInstance, a: int, b: int) -> int:
    if not (0 <= a < 1 << (inst.dlog_bits + inst.step_bits) and 0 <= b < 1 << inst.step_bits):
        raise ValueError("exponent pair out of range")
    return pow(inst.g, a, inst.p) * pow(inst.x, -b, inst.p) % inst.p


def eh_state(inst: EHInstance, h=None) -> qsim.StateVector:
    table = inst.function_table().reshape(-1)
    w = inst.width
    if h is not None:
        table, w = h.labels(table), h.t
    state = qsim.StateVector.zero(qsim.RegisterLayout(inst.input_bits, w))
    qsim.hadamard_layer(state)
    qsim.oracle_xor(state, table)
    top = inst.dlog_bits + inst.step_bits
    qsim.qft(state, range(top))
    return qsim.qft(state, range(top, inst.input_bits))


def _lowmem_distribution(inst: EHInstance, h) -> np.ndarray:
    vals = inst.function_table()
    if h is not None:
        vals = h.labels(vals.reshape(-1)).reshape(vals.shape)
    p = np.zeros(vals.size)
    for z in np.unique(vals):
        amp = np.fft.ifft2((vals == z).astype(np.complex128)).reshape(-1)
        p += amp.real**2 + amp.imag**2
    return p


def eh_distribution(inst: EHInstance, h=None, engine: str = "closedform") -> Distribution:
    tag = "plain" if h is None else "hashed"
    if engine == "closedform":
        cells = (1 << inst.input_bits) * min(inst.p, 1 << inst.width)
        if cells > LOWMEM_CELLS:
            return Distribution(_lowmem_distribution(inst, h), inst.input_bits, tag)
        return closedform.ekera_table(inst, h).distribution(tag)
    if engine == "statevector":
        return Distribution(qsim.input_distribution(eh_state(inst, h)), inst.input_bits, tag)
    raise ValueError(f"unknown engine {engine}")


def sample_pairs(inst: EHInstance, count: int, rng, spec: FamilySpec | None = None,
                 cache: dict | None = None) -> list[tuple[int, int]]:
    """``count`` measured (j, k) pairs; a fresh hash per execution when ``spec`` is given."""
    rng = as_rng(rng)
    cache = {} if cache is None else cache
    out = []
    for _ in range(count):
        h = None if spec is None or spec.identity else sample(spec, rng)
        key = None if h is None else h.key()
        if key not in cache:
            cache[key] = eh_distribution(inst, h).probs
        out.append(inst.split(qsim.sample_index(cache[key], rng)))
    return out


def candidate_scores(samples, dlog_bits: int, step_bits: int) -> np.ndarray:
    """Total circular distance of (d' j + 2^m k) mod 2^(m+l) from 0, for d' = 0 .. 2^m - 1."""
    M = 1 << (dlog_bits + step_bits)
    j = np.array([s[0] for s in samples], dtype=np.int64)
    k = np.array([s[1] for s in samples], dtype=np.int64)
    cand = np.arange(1 << dlog_bits, dtype=np.int64)[:, None]
    v = (cand * j[None, :] + (k[None, :] << dlog_bits)) % M
    return np.minimum(v, M - v).sum(axis=1)


def recover_d_scoring(samples, inst: EHInstance, include_zero: bool = False) -> int:
    """Best-scoring d' in [1, 2^m) with g^d' = x; the planted ``inst.d`` is never read."""
    if not samples:
        raise ValueError("no samples")
    scores = candidate_scores(samples, inst.dlog_bits, inst.step_bits)
    order = np.argsort(scores, kind="stable")
    for c in order:
        c = int(c)
        if c == 0 and not include_zero:
            continue
        if pow(inst.g, c, inst.p) == inst.x % inst.p:
            return c
    raise NoCandidate("no candidate verifies g^d = x")


def dlog_via_eh(p: int, base: int, target: int, order: int, rng, samples: int = 24,
                spec: FamilySpec | None = None, rounds: int = 4) -> tuple[int, int]:
    """Discrete log of ``target`` to ``base`` in Z_p^*; returns (d mod order, pairs used)."""
    rng = as_rng(rng)
    if target % p == 1:
        return 0, 0
    inst = EHInstance(p, base % p, target % p, max(1, (order - 1).bit_length()))
    pairs: list = []
    cache: dict = {}
    for _ in range(rounds):
        pairs += sample_pairs(inst, samples, rng, spec, cache)
        try:
            return recover_d_scoring(pairs, inst) % order, len(pairs)
        except NoCandidate:
            continue
    raise NoCandidate(f"no logarithm of {target} found after {len(pairs)} pairs")


def qubit_ledger(inst: EHInstance, t: int | None) -> dict:
    base = inst.input_bits
    return {
        "input_bits": base,
        "plain_total": base + inst.width,
        "hashed_total": base + (inst.width if t is None else t),
    }
