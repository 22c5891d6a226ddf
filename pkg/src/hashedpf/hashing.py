"""Linear universal hash family h_r(x) = (<x,r_1>, ..., <x,r_t>) over GF(2)^n.

Also provides the identity "hash" (for unhashed baselines that share the
hashed code paths) and an explicit lookup-table hash for hand-built examples.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from . import kernels
from .f2lin import BitVec, DimensionError, parity

ENUMERATION_LIMIT = 24


class FamilyTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    """Parameters of H_t over an n-bit domain. ``identity=True`` selects h = id."""

    n: int
    t: int
    identity: bool = False

    def __post_init__(self):
        if self.n < 1 or self.t < 1:
            raise ValueError("n and t must be >= 1")
        if self.identity and self.t != self.n:
            raise ValueError("identity mode requires t == n")

    @classmethod
    def identity_of(cls, n: int) -> "FamilySpec":
        return cls(n, n, identity=True)

    @property
    def size(self) -> int:
        return 1 if self.identity else 1 << (self.n * self.t)

    @property
    def collision_probability(self) -> float:
        return 0.0 if self.identity else 2.0**-self.t


class _HashBase:
    n: int
    t: int

    def apply(self, x: BitVec) -> BitVec:
        if x.n != self.n:
            raise DimensionError(f"hash domain is {self.n} bits, got {x.n}")
        return BitVec(self.apply_int(x.value), self.t)

    __call__ = apply

    def apply_int(self, v: int) -> int:
        raise NotImplementedError

    def labels(self, values) -> np.ndarray:
        """Vectorised apply_int over an int array."""
        return np.array([self.apply_int(int(v)) for v in np.asarray(values)], dtype=np.int64)

    def key(self):
        raise NotImplementedError


@dataclass(frozen=True)
class LinearHash(_HashBase):
    seeds: tuple[int, ...]
    n: int

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("at least one seed required")
        for r in self.seeds:
            if not 0 <= r < (1 << self.n):
                raise ValueError(f"seed {r} does not fit in {self.n} bits")

    @classmethod
    def from_bitvecs(cls, rs) -> "LinearHash":
        rs = list(rs)
        n = rs[0].n
        if any(r.n != n for r in rs):
            raise DimensionError("seeds of unequal length")
        return cls(tuple(r.value for r in rs), n)

    @property
    def t(self) -> int:
        return len(self.seeds)

    def apply_int(self, v: int) -> int:
        out = 0
        for r in self.seeds:
            out = (out << 1) | parity(v & r)
        return out

    def labels(self, values) -> np.ndarray:
        return kernels.parity_labels(np.asarray(values, dtype=np.int64), np.array(self.seeds, dtype=np.int64))

    def seed_strings(self) -> list[str]:
        return [format(r, f"0{self.n}b") for r in self.seeds]

    def key(self):
        return ("linear", self.n, self.seeds)


@dataclass(frozen=True)
class IdentityHash(_HashBase):
    n: int

    @property
    def t(self) -> int:
        return self.n

    def apply_int(self, v: int) -> int:
        return v

    def labels(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.int64).copy()

    def key(self):
        return ("id", self.n)


class TableHash(_HashBase):
    """Arbitrary map from n-bit codes to t-bit labels; unlisted codes hash to 0."""

    def __init__(self, mapping: Mapping[int, int], n: int, t: int):
        self.n, self.t = n, t
        self.mapping = dict(mapping)
        for k, v in self.mapping.items():
            if not (0 <= k < (1 << n) and 0 <= v < (1 << t)):
                raise ValueError(f"entry {k}->{v} out of range")

    def apply_int(self, v: int) -> int:
        return self.mapping.get(v, 0)

    def key(self):
        return ("table", self.n, self.t, tuple(sorted(self.mapping.items())))


def sample(spec: FamilySpec, rng: np.random.Generator):
    if spec.identity:
        return IdentityHash(spec.n)
    seeds = rng.integers(0, 1 << spec.n, size=spec.t)
    return LinearHash(tuple(int(r) for r in seeds), spec.n)


def apply(h, x: BitVec) -> BitVec:
    return h.apply(x)


def enumerate_family(spec: FamilySpec, limit: int = ENUMERATION_LIMIT) -> Iterator[LinearHash]:
    """Yield every member of H_t once (seed tuples in lexicographic order)."""
    if spec.identity:
        yield IdentityHash(spec.n)
        return
    if spec.n * spec.t > limit:
        raise FamilyTooLarge(f"n*t = {spec.n * spec.t} exceeds enumeration guard {limit}")
    for seeds in itertools.product(range(1 << spec.n), repeat=spec.t):
        yield LinearHash(seeds, spec.n)


def zn_width(N: int) -> int:
    if N < 2:
        raise ValueError("N must be >= 2")
    return (N - 1).bit_length()


def encode_zn(v: int, N: int) -> BitVec:
    """Big-endian fixed-width encoding of a residue mod N."""
    if not 0 <= v < N:
        raise ValueError(f"{v} is not a residue mod {N}")
    return BitVec(v, zn_width(N))


def partition_hash(values, blocks, n: int) -> TableHash:
    """TableHash sending ``values[k]`` to the label of the block containing k.

    ``blocks`` is a list of index sets, block i receiving label i.
    """
    t = max(1, (len(blocks) - 1).bit_length())
    mapping = {}
    for label, block in enumerate(blocks):
        for k in block:
            mapping[int(values[k])] = label
    return TableHash(mapping, n, t)
