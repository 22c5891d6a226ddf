"""Even-Mansour over a SiMeck-style Feistel permutation, and the n+1 qubit key recovery.

Words are n-bit ints; bit index 0 is the most significant bit. The left half
L is the high n/2 bits. One round maps (L, R) to (F(L) xor R, L) with

    F(L)_i = L_i & L_{i+5} ^ L_{i+1} ^ k'_i     (indices mod n/2)
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qsim
from .experiment import as_rng
from .f2lin import EchelonBasis, orthogonal_complement, parity, span_elements
from .qsim import CNOT, NOT, TOFFOLI, Gate, GateList

MAX_COMPILE_WIDTH = 16


class AttackFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class EMInstance:
    n: int
    rounds: int
    kprime: int  # n/2-bit round key, reused every round
    k: int  # whitening key

    def __post_init__(self):
        if self.n % 2 or self.n < 4:
            raise ValueError("block size must be even with n/2 >= 2")
        if self.rounds < 1:
            raise ValueError("need at least one round")
        if not 0 <= self.kprime < 1 << self.half:
            raise ValueError("round key does not fit n/2 bits")
        if not 0 <= self.k < 1 << self.n:
            raise ValueError("whitening key does not fit n bits")

    @property
    def half(self) -> int:
        return self.n // 2

    @classmethod
    def random(cls, n: int, rounds: int, rng, k: int | None = None, kprime: int | None = None):
        rng = as_rng(rng)
        if kprime is None:
            kprime = int(rng.integers(0, 1 << (n // 2)))
        if k is None:
            k = int(rng.integers(0, 1 << n))
        return cls(n, rounds, kprime, k)


def _rotl(v, j: int, h: int):
    j %= h
    mask = (1 << h) - 1
    return ((v << j) | (v >> (h - j))) & mask if j else v


def round_function(left, kprime: int, h: int):
    return (left & _rotl(left, 5, h)) ^ _rotl(left, 1, h) ^ kprime


def simeck_round(word, kprime: int, n: int):
    if n % 2:
        raise ValueError("odd block size")
    h = n // 2
    mask = (1 << h) - 1
    left, right = word >> h, word & mask
    return ((round_function(left, kprime, h) ^ right) << h) | left


def simeck_inverse_round(word, kprime: int, n: int):
    h = n // 2
    mask = (1 << h) - 1
    a, b = word >> h, word & mask
    return (b << h) | (a ^ round_function(b, kprime, h))


def simeck_forward(inst: EMInstance, word):
    """The public permutation P: ``rounds`` rounds with the fixed round key."""
    for _ in range(inst.rounds):
        word = simeck_round(word, inst.kprime, inst.n)
    return word


def simeck_backward(inst: EMInstance, word):
    for _ in range(inst.rounds):
        word = simeck_inverse_round(word, inst.kprime, inst.n)
    return word


def em_encrypt(inst: EMInstance, x):
    return simeck_forward(inst, x ^ inst.k) ^ inst.k


def simon_function(inst: EMInstance, x):
    """P(x) xor EM_k(x), which satisfies f(x) = f(x xor k)."""
    return simeck_forward(inst, x) ^ em_encrypt(inst, x)


def compile_simeck(inst: EMInstance) -> GateList:
    """In-place gate list for P; each round's half swap is a wire relabeling."""
    n, h = inst.n, inst.half
    if n > MAX_COMPILE_WIDTH:
        raise ValueError(f"compilation limited to {MAX_COMPILE_WIDTH} wires")
    pos = list(range(n))  # logical wire -> physical wire
    gates: list[Gate] = []
    for _ in range(inst.rounds):
        for i in range(h):
            tgt = pos[i + h]
            j5 = (i + 5) % h
            if j5 == i:  # x_i & x_i = x_i
                gates.append(CNOT(pos[i], tgt))
            else:
                gates.append(TOFFOLI(pos[i], pos[j5], tgt))
            gates.append(CNOT(pos[(i + 1) % h], tgt))
            if (inst.kprime >> (h - 1 - i)) & 1:
                gates.append(NOT(tgt))
        pos = pos[h:] + pos[:h]
    return GateList(n, tuple(gates), tuple(range(n)), tuple(pos))


def key_layer(k: int, n: int) -> GateList:
    return GateList(n, tuple(NOT(i) for i in range(n) if (k >> (n - 1 - i)) & 1))


def compile_em(inst: EMInstance) -> GateList:
    layer = key_layer(inst.k, inst.n)
    return layer.then(compile_simeck(inst)).then(layer)


def parity_gates(gl: GateList, seeds, n: int) -> list[Gate]:
    """CNOTs adding <out, r_j> of gl's logical output into output wire n + j."""
    out = []
    for j, r in enumerate(seeds):
        for i in range(n):
            if (r >> (n - 1 - i)) & 1:
                out.append(CNOT(gl.out_map[i], n + j))
    return out


def attack_circuit(inst: EMInstance, seeds) -> GateList:
    """Classical core of the attack circuit on n + t wires.

    Computes |x>|0> -> |x>|h(P(x)) xor h(EM_k(x))> by uncomputing P and EM in place.
    """
    n, t = inst.n, len(seeds)
    P, E = compile_simeck(inst), compile_em(inst)
    gates = (
        list(P.gates)
        + parity_gates(P, seeds, n)
        + list(reversed(P.gates))
        + list(E.gates)
        + parity_gates(E, seeds, n)
        + list(reversed(E.gates))
    )
    return GateList(n + t, tuple(gates))


def attack_sample(inst: EMInstance, seeds, rng) -> tuple[int, qsim.RegisterLayout]:
    n = inst.n
    layout = qsim.RegisterLayout(n, len(seeds))
    state = qsim.StateVector.zero(layout)
    qsim.hadamard_layer(state)
    qsim.run_gatelist(state, attack_circuit(inst, seeds))
    qsim.hadamard_layer(state)
    y, _ = qsim.measure(state, "input", rng)
    return y.value, layout


@dataclass
class AttackResult:
    k: int
    queries: int
    restarts: int
    classical_queries: int
    samples: list = field(default_factory=list)
    wires: int = 0

    def key_string(self, n: int) -> str:
        return format(self.k, f"0{n}b")


def _verify(inst: EMInstance, cand: int, xs) -> bool:
    # EM queries on the left, public permutation on the right
    return bool(np.all(em_encrypt(inst, xs) == (simeck_forward(inst, xs ^ cand) ^ cand)))


def em_attack(inst: EMInstance, rng, t: int = 1, verify_points: int = 16, max_restarts: int = 20,
              enumerate_limit: int = 12) -> AttackResult:
    """Recover k from measurements of the n + t wire circuit.

    Candidates are confirmed with classical EM queries. When the rank stalls
    (f has extra collisions for few rounds) every vector orthogonal to the
    collected samples is tried; on total failure the sample set is discarded.
    """
    rng = as_rng(rng)
    n = inst.n
    xs = rng.integers(0, 1 << n, size=verify_points, dtype=np.int64)
    stall_limit = 8 * n
    queries = classical = 0
    samples: list[int] = []
    wires = 0
    for restart in range(max_restarts + 1):
        basis = EchelonBasis(n)
        since = 0
        while True:
            seeds = [int(r) for r in rng.integers(0, 1 << n, size=t)]
            y, layout = attack_sample(inst, seeds, rng)
            wires = layout.total
            queries += 1
            samples.append(y)
            since = 0 if basis.add(y) else since + 1
            if basis.rank == n - 1:
                s = orthogonal_complement(basis.rows(), n)[0]
                classical += verify_points
                if _verify(inst, s, xs):
                    return AttackResult(s, queries, restart, classical, samples, wires)
                break
            if since >= stall_limit or basis.rank == n:
                comp = orthogonal_complement(basis.rows(), n)
                if len(comp) <= enumerate_limit:
                    for cand in sorted(span_elements(comp), key=lambda c: c == 0):
                        classical += verify_points
                        if _verify(inst, cand, xs):
                            return AttackResult(cand, queries, restart, classical, samples, wires)
                break
    raise AttackFailed(f"no key confirmed after {max_restarts + 1} sample sets")


def orthogonal_fraction(samples, k: int) -> float:
    """Share of measured y with <y, k> = 0."""
    return float(np.mean([parity(y & k) == 0 for y in samples]))
