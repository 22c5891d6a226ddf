"""Single-control-qubit period finding with measurement feedback.

Input bit x_{q-1-i} is handled at step i: H on the control, controlled
multiplication of the output register by c_i = h(a^(2^(q-1-i))), the phase
exp(2 pi i (y mod 2^i) / 2^(i+1)) on the |1> branch, H, measure y_i. The
assembled y = sum y_i 2^i has the same law as the full QFT circuit under the
exp(+2 pi i x y / 2^q) convention.

A compressor h must be a group homomorphism: the output register accumulates
h(a^(2^j)) products, which equal h(a^x) only in that case.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import qsim
from .closedform import Distribution
from .experiment import as_rng
from .gfpm import GFContext
from .groups import FiniteGroup, GFMultiplicative, prime_field

GroupSpec = FiniteGroup
HOMOMORPHISM_PAIRS = 1000


class NotHomomorphic(ValueError):
    pass


@dataclass
class Compressor:
    source: FiniteGroup
    target: FiniteGroup
    fn: Callable[[int], int]
    name: str = "compressor"
    homomorphic: bool = True  # False marks the experimental mode, never checked
    _verified: bool = field(default=False, repr=False)

    def __call__(self, u: int) -> int:
        return int(self.fn(u))

    @classmethod
    def identity(cls, group: FiniteGroup) -> "Compressor":
        return cls(group, group, lambda u: u, "identity")

    def check(self, rng=None, pairs: int = HOMOMORPHISM_PAIRS) -> None:
        if not self.homomorphic or self._verified:
            return
        rng = as_rng(0 if rng is None else rng)
        elems = self.source.elements()
        idx = rng.integers(0, len(elems), size=(pairs, 2))
        for i, j in idx:
            u, v = elems[int(i)], elems[int(j)]
            lhs = self.target.op(self(u), self(v))
            if lhs != self(self.source.op(u, v)):
                raise NotHomomorphic(f"h({u})*h({v}) != h({u}*{v})")
        self._verified = True


def norm_compressor(ctx: GFContext) -> Compressor:
    """The norm map GF(p^m)^* -> GF(p)^* on integer codes."""
    exp, log = ctx._tables
    n = ctx.order - 1

    def fn(u):
        return int(exp[(int(log[u]) * ctx.q1) % n])

    return Compressor(GFMultiplicative(ctx), prime_field(ctx.p), fn, "norm")


def table_compressor(source: FiniteGroup, target: FiniteGroup, mapping: dict) -> Compressor:
    """Arbitrary fixed map, flagged non-homomorphic (experimental, no guarantees)."""
    return Compressor(source, target, lambda u: mapping[u], "table", homomorphic=False)


def _factors(group: FiniteGroup, a: int, q: int, comp: Compressor | None):
    """(output group, [c_0 .. c_{q-1}]) with c_i = h(a^(2^(q-1-i)))."""
    group.check(a)
    out = group if comp is None else comp.target
    cs = []
    for i in range(q):
        c = group.power(a, 1 << (q - 1 - i))
        cs.append(c if comp is None else comp(c))
    return out, cs


def _step(phi, perm, y_low: int, i: int):
    """Branch amplitudes (unnormalised) for outcomes 0 and 1 at step i."""
    shifted = np.empty_like(phi)
    shifted[perm] = phi
    omega = np.exp(2j * np.pi * y_low / (1 << (i + 1)))
    return (phi + omega * shifted) / 2, (phi - omega * shifted) / 2


def _setup(group, a, q, compressor, rng):
    if compressor is not None:
        if compressor.source is not group and compressor.source.name != group.name:
            raise ValueError("compressor source differs from the group")
        compressor.check(rng)
    out, cs = _factors(group, a, q, compressor)
    phi = np.zeros(1 << out.width, dtype=np.complex128)
    phi[out.identity] = 1.0
    perms = [out.mul_permutation(c) for c in cs]
    return phi, perms


def semiclassical_run(group: FiniteGroup, a: int, q: int, compressor: Compressor | None = None, rng=None) -> int:
    rng = as_rng(rng)
    phi, perms = _setup(group, a, q, compressor, None)
    y = 0
    for i in range(q):
        b0, b1 = _step(phi, perms[i], y, i)
        p0 = float(np.vdot(b0, b0).real)
        p1 = float(np.vdot(b1, b1).real)
        bit = int(rng.random() * (p0 + p1) >= p0)
        phi = (b1 if bit else b0) / np.sqrt(p1 if bit else p0)
        y |= bit << i
    return y


def semiclassical_distribution(group: FiniteGroup, a: int, q: int, compressor: Compressor | None = None,
                               prune: float = 1e-15) -> Distribution:
    """Exact outcome law by enumerating every measurement branch."""
    phi, perms = _setup(group, a, q, compressor, None)
    probs = np.zeros(1 << q)
    branches = [(phi, 0, 1.0)]
    for i in range(q):
        nxt = []
        for phi, y, w in branches:
            for bit, b in enumerate(_step(phi, perms[i], y, i)):
                p = float(np.vdot(b, b).real)
                if p * w > prune:
                    nxt.append((b / np.sqrt(p), y | (bit << i), w * p))
        branches = nxt
    for _, y, w in branches:
        probs[y] += w
    return Distribution(probs, q)


def qft_distribution(group: FiniteGroup, a: int, q: int, compressor: Compressor | None = None) -> Distribution:
    """Same circuit with a full input register and a dense QFT."""
    out = group if compressor is None else compressor.target
    table = []
    x_val = group.identity
    for _ in range(1 << q):
        table.append(x_val if compressor is None else compressor(x_val))
        x_val = group.op(x_val, a)
    state = qsim.StateVector.basis(qsim.RegisterLayout(q, out.width), 0, out.identity)
    qsim.hadamard_layer(state)
    qsim.oracle_group(state, table, out)
    qsim.qft(state)
    return Distribution(qsim.input_distribution(state), q)


def sample_runs(group, a, q, trials: int, rng, compressor=None) -> np.ndarray:
    rng = as_rng(rng)
    return np.array([semiclassical_run(group, a, q, compressor, rng) for _ in range(trials)], dtype=np.int64)


def hashed_run_qubit_ledger(group: FiniteGroup, compressor: Compressor | None) -> tuple[int, int]:
    target = group if compressor is None else compressor.target
    return 1 + group.order_bits, 1 + target.order_bits
