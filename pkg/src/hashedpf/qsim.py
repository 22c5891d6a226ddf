"""Dense statevector simulator for period-finding circuits.

Wires are numbered 0..q+w-1; wires 0..q-1 form the input register and
q..q+w-1 the output register. Wire 0 is the most significant bit of the flat
basis index, so basis index = x * 2**w + z for input value x and output z.

Gate functions mutate the passed state in place and return it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .f2lin import BitVec

MAX_QUBITS = 26
NORM_TOL = 1e-9


class SimulatorCapExceeded(ValueError):
    pass


class WireError(ValueError):
    pass


class DegenerateMeasurement(RuntimeError):
    pass


@dataclass(frozen=True)
class RegisterLayout:
    input_bits: int
    output_bits: int

    def __post_init__(self):
        if self.input_bits < 1 or self.output_bits < 0:
            raise ValueError("need at least one input wire")
        if self.total > MAX_QUBITS:
            raise SimulatorCapExceeded(f"{self.total} qubits exceeds the {MAX_QUBITS}-qubit cap")

    @property
    def total(self) -> int:
        return self.input_bits + self.output_bits

    @property
    def input_wires(self) -> list[int]:
        return list(range(self.input_bits))

    @property
    def output_wires(self) -> list[int]:
        return list(range(self.input_bits, self.total))

    def register(self, name) -> list[int]:
        if name == "input":
            return self.input_wires
        if name == "output":
            return self.output_wires
        wires = list(name)
        self._check_wires(wires)
        return wires

    def _check_wires(self, wires):
        for w in wires:
            if not 0 <= w < self.total:
                raise WireError(f"wire {w} out of range for {self.total} qubits")


class StateVector:
    def __init__(self, layout: RegisterLayout, amplitudes: np.ndarray):
        amplitudes = np.ascontiguousarray(amplitudes, dtype=np.complex128).reshape(-1)
        if amplitudes.size != 1 << layout.total:
            raise ValueError("amplitude count does not match layout")
        self.layout = layout
        self.amplitudes = amplitudes

    @classmethod
    def zero(cls, layout: RegisterLayout) -> "StateVector":
        return cls.basis(layout, 0, 0)

    @classmethod
    def basis(cls, layout: RegisterLayout, x: int, z: int = 0) -> "StateVector":
        amps = np.zeros(1 << layout.total, dtype=np.complex128)
        amps[(x << layout.output_bits) | z] = 1.0
        return cls(layout, amps)

    def copy(self) -> "StateVector":
        return StateVector(self.layout, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def matrix(self) -> np.ndarray:
        """Amplitudes as a (2^q, 2^w) view indexed [x, z]."""
        return self.amplitudes.reshape(1 << self.layout.input_bits, 1 << self.layout.output_bits)

    def probabilities(self) -> np.ndarray:
        a = self.amplitudes
        return a.real**2 + a.imag**2

    def __repr__(self):
        return f"StateVector(q={self.layout.input_bits}, w={self.layout.output_bits})"


def hadamard_layer(state: StateVector, wires: Iterable[int] | str = "input") -> StateVector:
    wires = state.layout.register(wires)
    n = state.layout.total
    for w in wires:
        kernels.hadamard_wire(state.amplitudes, n, w)
    return state


def _contiguous(wires: Sequence[int]) -> tuple[int, int]:
    wires = sorted(wires)
    if not wires or wires != list(range(wires[0], wires[0] + len(wires))):
        raise WireError("QFT wires must form a contiguous block")
    return wires[0], len(wires)


def qft(state: StateVector, wires: Iterable[int] | str = "input", inverse: bool = False) -> StateVector:
    """|x> -> 2^{-k/2} sum_y exp(+2 pi i x y / 2^k) |y> on a contiguous block of k wires."""
    start, k = _contiguous(state.layout.register(wires))
    n = state.layout.total
    view = state.amplitudes.reshape(1 << start, 1 << k, 1 << (n - start - k))
    # numpy's ifft uses the +i sign convention
    out = np.fft.fft(view, axis=1, norm="ortho") if inverse else np.fft.ifft(view, axis=1, norm="ortho")
    state.amplitudes[:] = out.reshape(-1)
    return state


def apply_permutation(state: StateVector, perm: np.ndarray) -> StateVector:
    """Basis map |i> -> |perm[i]>; ``perm`` must be a bijection."""
    new = np.empty_like(state.amplitudes)
    new[perm] = state.amplitudes
    state.amplitudes = new
    return state


def oracle_xor(state: StateVector, table: Sequence[int]) -> StateVector:
    """U_f: |x>|z> -> |x>|z xor f(x)> for f given as a table over all 2^q inputs."""
    q, w = state.layout.input_bits, state.layout.output_bits
    table = np.asarray(table, dtype=np.int64)
    if table.shape != (1 << q,):
        raise ValueError(f"oracle table has {table.size} entries, expected {1 << q}")
    if table.size and (table.min() < 0 or table.max() >= (1 << w)):
        raise ValueError(f"oracle values exceed the {w}-bit output register")
    x = np.arange(1 << q, dtype=np.int64)[:, None]
    z = np.arange(1 << w, dtype=np.int64)[None, :]
    perm = ((x << w) | (z ^ table[:, None])).reshape(-1)
    return apply_permutation(state, perm)


def oracle_group(state: StateVector, table: Sequence[int], group) -> StateVector:
    """|x>|y> -> |x>|y o g(x)> with g(x) = table[x] in ``group``.

    Output codes outside the group are left untouched.
    """
    q, w = state.layout.input_bits, state.layout.output_bits
    if w != group.width:
        raise ValueError(f"output register has {w} bits, group needs {group.width}")
    if len(table) != 1 << q:
        raise ValueError("oracle table size mismatch")
    cache: dict[int, np.ndarray] = {}
    rows = []
    for v in table:
        v = int(v)
        if v not in cache:
            cache[v] = group.mul_permutation(v)
        rows.append(cache[v])
    perm = (np.arange(1 << q, dtype=np.int64)[:, None] << w) | np.stack(rows)
    return apply_permutation(state, perm.reshape(-1))


# -- reversible gate lists -----------------------------------------------------

GATE_KINDS = {"NOT": 0, "CNOT": 1, "TOFFOLI": 2}
_ARITY = {"NOT": 1, "CNOT": 2, "TOFFOLI": 3}


@dataclass(frozen=True)
class Gate:
    kind: str
    wires: tuple[int, ...]  # controls first, target last

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind}")
        if len(self.wires) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {_ARITY[self.kind]} wires")
        if len(set(self.wires)) != len(self.wires):
            raise WireError(f"{self.kind} wires must be distinct: {self.wires}")

    @property
    def target(self) -> int:
        return self.wires[-1]

    def row(self) -> list[int]:
        w = list(self.wires)
        c1 = w[0] if len(w) > 1 else 0
        c2 = w[1] if len(w) > 2 else 0
        return [GATE_KINDS[self.kind], c1, c2, w[-1]]


def NOT(i):
    return Gate("NOT", (i,))


def CNOT(c, i):
    return Gate("CNOT", (c, i))


def TOFFOLI(c1, c2, i):
    return Gate("TOFFOLI", (c1, c2, i))


@dataclass(frozen=True)
class GateList:
    """Reversible NOT/CNOT/TOFFOLI circuit on ``width`` wires.

    Logical input bit i enters on wire ``in_map[i]`` and logical output bit i is
    read from wire ``out_map[i]``; relabelings stand in for SWAP gates.
    """

    width: int
    gates: tuple[Gate, ...] = ()
    in_map: tuple[int, ...] = field(default=None)
    out_map: tuple[int, ...] = field(default=None)

    def __post_init__(self):
        ident = tuple(range(self.width))
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "in_map", tuple(self.in_map) if self.in_map is not None else ident)
        object.__setattr__(self, "out_map", tuple(self.out_map) if self.out_map is not None else ident)
        for g in self.gates:
            for w in g.wires:
                if not 0 <= w < self.width:
                    raise WireError(f"gate {g} touches wire {w} outside width {self.width}")
        for m in (self.in_map, self.out_map):
            if sorted(m) != list(ident):
                raise ValueError("wire maps must be permutations")

    def __len__(self):
        return len(self.gates)

    def counts(self) -> dict[str, int]:
        out = {k: 0 for k in GATE_KINDS}
        for g in self.gates:
            out[g.kind] += 1
        return out

    def array(self) -> np.ndarray:
        if not self.gates:
            return np.zeros((0, 4), dtype=np.int64)
        return np.array([g.row() for g in self.gates], dtype=np.int64)

    def inverse(self) -> "GateList":
        return GateList(self.width, tuple(reversed(self.gates)), self.out_map, self.in_map)

    def then(self, other: "GateList") -> "GateList":
        """Sequential composition: self first, then other on self's logical outputs."""
        if other.width != self.width:
            raise ValueError("width mismatch")
        # physical wire w of `other` sits on our wire sigma[w]
        sigma = [0] * self.width
        for i, w in enumerate(other.in_map):
            sigma[w] = self.out_map[i]
        moved = tuple(Gate(g.kind, tuple(sigma[w] for w in g.wires)) for g in other.gates)
        return GateList(
            self.width,
            self.gates + moved,
            self.in_map,
            tuple(sigma[w] for w in other.out_map),
        )

    def embed(self, width: int) -> "GateList":
        """Same gates on a wider register; extra wires map to themselves."""
        extra = tuple(range(self.width, width))
        return GateList(width, self.gates, self.in_map + extra, self.out_map + extra)

    def physical(self, words) -> np.ndarray:
        """Apply gates to physical basis words (no relabeling)."""
        return kernels.eval_gates(np.asarray(words, dtype=np.int64), self.array(), self.width)

    def evaluate(self, word: int) -> int:
        """Logical permutation value on one classical word."""
        return int(self.evaluate_many([word])[0])

    def evaluate_many(self, words) -> np.ndarray:
        words = np.asarray(words, dtype=np.int64)
        n = self.width
        phys = np.zeros_like(words)
        for i, w in enumerate(self.in_map):
            phys |= ((words >> (n - 1 - i)) & 1) << (n - 1 - w)
        phys = self.physical(phys)
        out = np.zeros_like(words)
        for i, w in enumerate(self.out_map):
            out |= ((phys >> (n - 1 - w)) & 1) << (n - 1 - i)
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "width": self.width,
                "gates": [{"kind": g.kind, "wires": list(g.wires)} for g in self.gates],
                "in_map": list(self.in_map),
                "out_map": list(self.out_map),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "GateList":
        d = json.loads(text)
        return cls(
            d["width"],
            tuple(Gate(g["kind"], tuple(g["wires"])) for g in d["gates"]),
            d.get("in_map"),
            d.get("out_map"),
        )


def run_gatelist(target, gates: GateList):
    """Run a gate list on a StateVector (physical wires) or on classical word(s)."""
    if isinstance(target, StateVector):
        n = target.layout.total
        if gates.width > n:
            raise WireError(f"gate list spans {gates.width} wires, state has {n}")
        g = gates.embed(n) if gates.width < n else gates
        perm = g.physical(np.arange(1 << n, dtype=np.int64))
        return apply_permutation(target, perm)
    if isinstance(target, BitVec):
        if target.n != gates.width:
            raise WireError("word length differs from gate list width")
        return BitVec(gates.evaluate(target.value), target.n)
    if isinstance(target, (int, np.integer)):
        return gates.evaluate(int(target))
    return gates.evaluate_many(target)


# -- measurement ---------------------------------------------------------------

def marginal(state: StateVector, wires) -> np.ndarray:
    """Exact distribution of the listed wires (first wire = most significant)."""
    wires = state.layout.register(wires)
    n = state.layout.total
    p = state.probabilities()
    if wires == list(range(wires[0], wires[0] + len(wires))):
        start, k = wires[0], len(wires)
        return p.reshape(1 << start, 1 << k, -1).sum(axis=(0, 2))
    t = p.reshape((2,) * n)
    others = tuple(i for i in range(n) if i not in wires)
    t = t.sum(axis=others)
    order = sorted(wires)
    t = np.transpose(t, [order.index(w) for w in wires])
    return t.reshape(-1)


def input_distribution(state: StateVector) -> np.ndarray:
    return state.probabilities().reshape(1 << state.layout.input_bits, -1).sum(axis=1)


def sample_index(p: np.ndarray, rng: np.random.Generator) -> int:
    total = p.sum()
    if not total > 0:
        raise DegenerateMeasurement("zero-norm register distribution")
    c = np.cumsum(p)
    return int(min(np.searchsorted(c, rng.random() * c[-1], side="right"), len(p) - 1))


def measure(state: StateVector, register, rng: np.random.Generator):
    """Born-rule measurement of a register; returns (outcome, collapsed state)."""
    wires = state.layout.register(register)
    p = marginal(state, wires)
    k = len(wires)
    outcome = sample_index(p, rng)
    n = state.layout.total
    idx = np.arange(1 << n, dtype=np.int64)
    val = np.zeros_like(idx)
    for w in wires:
        val = (val << 1) | ((idx >> (n - 1 - w)) & 1)
    amps = np.where(val == outcome, state.amplitudes, 0)
    amps /= np.sqrt(p[outcome])
    return BitVec(outcome, k), StateVector(state.layout, amps)


def check_norm(state: StateVector, tol: float = NORM_TOL) -> bool:
    return abs(state.norm() - 1.0) < tol
