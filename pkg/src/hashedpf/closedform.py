"""Exact amplitude tables w[y, z] and the exact hash-family scaling check.

A table has one row per input-register outcome y and one column per output
value z. Tables are first built for the unhashed circuit (one column per
distinct f-value); hashing merges columns that share a label, which is exactly
what replacing f by h o f does to the final amplitudes.
"""
from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .hashing import FamilySpec, FamilyTooLarge

TOL = 1e-9
SCALING_LIMIT = 12


@dataclass
class Distribution:
    probs: np.ndarray
    bits: int
    tag: str = "plain"

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float)

    def __len__(self):
        return self.probs.size

    def __getitem__(self, y: int) -> float:
        return float(self.probs[y])

    def total(self) -> float:
        return float(self.probs.sum())

    def support(self, tol: float = 1e-12) -> list[int]:
        return [int(y) for y in np.flatnonzero(self.probs > tol)]

    def as_dict(self, tol: float = 1e-12) -> dict[int, float]:
        return {y: float(self.probs[y]) for y in self.support(tol)}

    def conditional_nonzero(self) -> np.ndarray:
        """Distribution renormalised over y != 0."""
        p = self.probs.copy()
        p[0] = 0.0
        s = p.sum()
        return p / s if s > 0 else p

    def total_variation(self, other) -> float:
        q = other.probs if isinstance(other, Distribution) else np.asarray(other, dtype=float)
        return 0.5 * float(np.abs(self.probs - q).sum())

    def sample(self, rng: np.random.Generator, size: int | None = None):
        p = self.probs / self.probs.sum()
        return rng.choice(p.size, size=size, p=p)

    def to_csv(self, tol: float = 0.0) -> str:
        buf = io.StringIO()
        buf.write("outcome_decimal,outcome_binary,probability\n")
        for y, p in enumerate(self.probs):
            if p > tol or tol == 0.0:
                buf.write(f"{y},{y:0{self.bits}b},{p:.17g}\n")
        return buf.getvalue()

    def to_json(self, tol: float = 1e-15) -> str:
        return json.dumps(
            {
                "tag": self.tag,
                "bits": self.bits,
                "probabilities": {f"{y:0{self.bits}b}": p for y, p in self.as_dict(tol).items()},
            }
        )


@dataclass
class AmplitudeTable:
    W: np.ndarray
    columns: np.ndarray  # output value labelling each column
    input_bits: int
    source: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=np.complex128)
        self.columns = np.asarray(self.columns, dtype=np.int64)
        if self.W.shape != (1 << self.input_bits, self.columns.size):
            raise ValueError(f"table shape {self.W.shape} does not match labels")

    def total_mass(self) -> float:
        return float((np.abs(self.W) ** 2).sum())

    def row_sums(self) -> np.ndarray:
        return self.W.sum(axis=1)

    def distribution(self, tag: str | None = None) -> Distribution:
        p = (self.W.real**2 + self.W.imag**2).sum(axis=1)
        return Distribution(p, self.input_bits, tag or ("hashed" if self.meta.get("hashed") else "plain"))

    def column(self, z: int) -> np.ndarray:
        (idx,) = np.flatnonzero(self.columns == z)
        return self.W[:, idx]

    def to_json(self) -> str:
        return json.dumps(
            {
                "source": self.source,
                "input_bits": self.input_bits,
                "columns": self.columns.tolist(),
                "real": self.W.real.tolist(),
                "imag": self.W.imag.tolist(),
                "meta": {k: v for k, v in self.meta.items() if isinstance(v, (int, float, str, bool))},
            }
        )


def _indicator(values: np.ndarray):
    cols, inv = np.unique(values, return_inverse=True)
    A = np.zeros((values.size, cols.size), dtype=np.complex128)
    A[np.arange(values.size), inv] = 1.0
    return cols, A


def hash_table(T: AmplitudeTable, h) -> AmplitudeTable:
    """Merge columns by hash label: column b of the result sums all z with h(z) = b."""
    if h is None:
        return T
    labels = np.asarray(h.labels(T.columns), dtype=np.int64)
    cols, inv = np.unique(labels, return_inverse=True)
    W = np.zeros((T.W.shape[0], cols.size), dtype=np.complex128)
    np.add.at(W.T, inv, T.W.T)
    meta = dict(T.meta, hashed=True, hash_key=repr(h.key()))
    return AmplitudeTable(W, cols, T.input_bits, T.source, meta)


def simon_table(f, h=None) -> AmplitudeTable:
    """w[y, z] = 2^-n * sum over x with h(f(x)) = z of (-1)^<x,y>."""
    table = np.asarray(getattr(f, "table", f), dtype=np.int64)
    n = int(table.size).bit_length() - 1
    if table.size != 1 << n:
        raise ValueError("Simon table must cover all 2^n inputs")
    cols, A = _indicator(table)
    kernels.fwht(A)
    A /= 1 << n
    return hash_table(AmplitudeTable(A, cols, n, "simon", {"n": n}), h)


def _geometric(theta_num: np.ndarray, count: np.ndarray, bits: int) -> np.ndarray:
    """sum_{c < count} exp(2 pi i c theta) for theta = theta_num / 2^bits."""
    theta = theta_num / float(1 << bits)
    out = np.empty(np.broadcast(theta, count).shape, dtype=np.complex128)
    zero = np.broadcast_to(theta_num == 0, out.shape)
    count = np.broadcast_to(count, out.shape).astype(float)
    theta = np.broadcast_to(theta, out.shape)
    out[zero] = count[zero]
    nz = ~zero
    th, c = theta[nz], count[nz]
    out[nz] = np.exp(1j * np.pi * (c - 1) * th) * np.sin(np.pi * c * th) / np.sin(np.pi * th)
    return out


def shor_table(inst, q: int, h=None) -> AmplitudeTable:
    """Closed-form order-finding table with columns a^k mod N, k < d.

    w[y, k] = 2^-q * sum_{c : cd + k < 2^q} exp(2 pi i (cd + k) y / 2^q)
    """
    N, a, d = inst.N, inst.a, inst.d
    Q = 1 << q
    y = np.arange(Q, dtype=np.int64)[:, None]
    k = np.arange(d, dtype=np.int64)[None, :]
    counts = np.maximum(0, -((k - Q) // d))  # ceil((2^q - k) / d)
    base = _geometric((d * y) % Q, counts, q)
    shift = np.exp(2j * np.pi * (((k * y) % Q) / Q))
    W = base * shift / Q
    cols = np.array([pow(a, int(i), N) for i in range(d)], dtype=np.int64)
    T = AmplitudeTable(W, cols, q, "shor", {"N": N, "a": a, "d": d, "q": q})
    return hash_table(T, h)


def ekera_table(inst, h=None) -> AmplitudeTable:
    """Rows y = j * 2^l + k over the (m+l)-bit and l-bit registers."""
    ja, kb = inst.dlog_bits + inst.step_bits, inst.step_bits
    A_, B_ = 1 << ja, 1 << kb
    vals = inst.function_table().reshape(-1)
    cols, ind = _indicator(vals)
    ind = ind.reshape(A_, B_, cols.size)
    # the prefactor 2^-(m+2l) times the two sums is exactly the normalised inverse DFT
    W = np.fft.ifft2(ind, axes=(0, 1)).reshape(A_ * B_, cols.size)
    meta = {"p": inst.p, "g": inst.g, "dlog_bits": inst.dlog_bits, "step_bits": inst.step_bits}
    return hash_table(AmplitudeTable(W, cols, ja + kb, "ekera", meta), h)


def cancellation_check(T: AmplitudeTable, tol: float = TOL) -> bool:
    s = np.abs(T.row_sums())
    return bool(np.all(s[1:] < tol))


def max_row_sum(T: AmplitudeTable) -> float:
    s = np.abs(T.row_sums())
    return float(s[1:].max()) if s.size > 1 else 0.0


@dataclass
class ScalingReport:
    n: int
    t: int
    family_size: int
    plain: np.ndarray
    averaged: np.ndarray
    max_deviation: float  # max over y != 0 of |p_h(y) - (1 - 2^-t) p(y)|
    zero_deviation: float  # |p_h(0) - (2^-t + (1 - 2^-t) p(0))|
    conditional_deviation: float

    def passed(self, tol: float = TOL) -> bool:
        return max(self.max_deviation, self.zero_deviation, self.conditional_deviation) < tol

    def summary(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "family_size": self.family_size,
            "max_deviation": self.max_deviation,
            "zero_deviation": self.zero_deviation,
            "conditional_deviation": self.conditional_deviation,
        }


def family_average(T: AmplitudeTable, spec: FamilySpec, limit: int = SCALING_LIMIT) -> np.ndarray:
    """Exact mean of the hashed distribution over every member of the family."""
    if spec.identity:
        return T.distribution().probs
    if spec.n * spec.t > limit:
        raise FamilyTooLarge(f"n*t = {spec.n * spec.t} exceeds guard {limit}")
    if T.columns.size and int(T.columns.max()) >= 1 << spec.n:
        raise ValueError(f"output values do not fit the {spec.n}-bit hash domain")
    return kernels.family_average(T.W, T.columns, spec.n, spec.t)


def scaling_verify(T: AmplitudeTable, spec: FamilySpec, limit: int = SCALING_LIMIT) -> ScalingReport:
    """Compare the exact family average against (1 - 2^-t) times the unhashed distribution.

    ``T`` must be the unhashed table.
    """
    if T.meta.get("hashed"):
        raise ValueError("scaling_verify needs the unhashed table")
    p = T.distribution().probs
    ph = family_average(T, spec, limit)
    scale = 1.0 - 2.0**-spec.t
    dev = np.abs(ph[1:] - scale * p[1:])
    zero = abs(ph[0] - (2.0**-spec.t + scale * p[0]))
    cp = Distribution(p, T.input_bits).conditional_nonzero()
    ch = Distribution(ph, T.input_bits).conditional_nonzero()
    return ScalingReport(
        spec.n,
        spec.t,
        spec.size,
        p,
        ph,
        float(dev.max()) if dev.size else 0.0,
        float(zero),
        float(np.abs(cp - ch).max()),
    )


def symmetric_scaling(T_plain: AmplitudeTable, T_hashed: AmplitudeTable) -> np.ndarray:
    """Per-outcome ratio p_h(y)/p(y) (nan where p(y) = 0)."""
    p = T_plain.distribution().probs
    ph = T_hashed.distribution().probs
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p > 1e-15, ph / p, np.nan)


def distribution_from_values(values: Sequence[float], bits: int, tag: str = "plain") -> Distribution:
    return Distribution(np.asarray(values, dtype=float), bits, tag)
