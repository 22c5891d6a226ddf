"""Exact linear algebra over GF(2) on bit vectors packed into Python ints.

Bit order: index 0 is the leftmost (most significant) digit of the written
string, so ``BitVec.from_str("100")[0] == 1`` and its integer value is 4.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Operands have incompatible bit lengths."""


class NullspaceNotUnique(ValueError):
    """The orthogonal complement does not contain exactly one nonzero vector."""


def parity(v: int) -> int:
    return bin(v).count("1") & 1


@dataclass(frozen=True, order=True)
class BitVec:
    """Element of GF(2)^n. ``value`` holds the bits big-endian; ``n`` is the length."""

    value: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("BitVec length must be >= 1")
        if not 0 <= self.value < (1 << self.n):
            raise ValueError(f"value {self.value} does not fit in {self.n} bits")

    @classmethod
    def from_str(cls, s: str) -> "BitVec":
        s = s.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a binary string: {s!r}")
        return cls(int(s, 2), len(s))

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "BitVec":
        v = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError("bits must be 0 or 1")
            v = (v << 1) | b
        return cls(v, len(bits))

    @classmethod
    def zeros(cls, n: int) -> "BitVec":
        return cls(0, n)

    def __str__(self) -> str:
        return format(self.value, f"0{self.n}b")

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not -self.n <= i < self.n:
            raise IndexError(i)
        i %= self.n
        return (self.value >> (self.n - 1 - i)) & 1

    def __iter__(self):
        return (self[i] for i in range(self.n))

    def _check(self, other: "BitVec"):
        if not isinstance(other, BitVec):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError(f"length mismatch: {self.n} vs {other.n}")

    def __xor__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self.value ^ other.value, self.n)

    __add__ = __xor__
    __sub__ = __xor__

    def weight(self) -> int:
        return bin(self.value).count("1")

    def is_zero(self) -> bool:
        return self.value == 0

    def concat(self, other: "BitVec") -> "BitVec":
        return BitVec((self.value << other.n) | other.value, self.n + other.n)


def inner(x: BitVec, y: BitVec) -> int:
    """Return the GF(2) inner product of two equal-length vectors."""
    if x.n != y.n:
        raise DimensionError(f"length mismatch: {x.n} vs {y.n}")
    return parity(x.value & y.value)


@dataclass(frozen=True)
class BitMatrix:
    rows: tuple[BitVec, ...]
    width: int

    def __init__(self, rows: Iterable[BitVec], width: int | None = None):
        rows = tuple(rows)
        if width is None:
            if not rows:
                raise ValueError("width is required for an empty matrix")
            width = rows[0].n
        for r in rows:
            if r.n != width:
                raise DimensionError(f"row of length {r.n} in matrix of width {width}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "width", width)

    @classmethod
    def from_strs(cls, rows: Iterable[str], width: int | None = None) -> "BitMatrix":
        return cls([BitVec.from_str(r) for r in rows], width)

    def __len__(self):
        return len(self.rows)

    def values(self) -> list[int]:
        return [r.value for r in self.rows]


class EchelonBasis:
    """Incrementally maintained row-echelon basis keyed by leading bit.

    Used by Simon-style loops: ``add`` returns True iff the vector was outside
    the current span.
    """

    def __init__(self, width: int):
        self.width = width
        self._pivots: dict[int, int] = {}

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            row = self._pivots.get(top)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        r = self.reduce(v)
        if r == 0:
            return False
        self._pivots[r.bit_length() - 1] = r
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def rows(self) -> list[int]:
        return list(self._pivots.values())


def rank(M: BitMatrix) -> int:
    basis = EchelonBasis(M.width)
    for v in M.values():
        basis.add(v)
    return basis.rank


def span_contains(M: BitMatrix, y: BitVec) -> bool:
    if y.n != M.width:
        raise DimensionError(f"vector of length {y.n} against width {M.width}")
    basis = EchelonBasis(M.width)
    for v in M.values():
        basis.add(v)
    return y.value in basis


def _reduced_echelon(values: Iterable[int], width: int) -> dict[int, int]:
    """Fully reduced echelon form as {pivot bit position: row}."""
    basis = EchelonBasis(width)
    for v in values:
        basis.add(v)
    piv = dict(basis._pivots)
    for p in sorted(piv):
        row = piv[p]
        for q in piv:
            if q != p and (piv[q] >> p) & 1:
                piv[q] ^= row
    return piv


def orthogonal_complement(values: Iterable[int], width: int) -> list[int]:
    """Basis (as ints) of {s : <r, s> = 0 for all rows r}."""
    piv = _reduced_echelon(values, width)
    free = [b for b in range(width) if b not in piv]
    out = []
    for f in free:
        s = 1 << f
        for p, row in piv.items():
            if (row >> f) & 1:
                s |= 1 << p
        out.append(s)
    return out


def nullspace_nontrivial(M: BitMatrix) -> BitVec:
    """Return the unique nonzero s orthogonal to every row; requires rank n-1."""
    comp = orthogonal_complement(M.values(), M.width)
    if len(comp) != 1:
        raise NullspaceNotUnique(
            f"rank {M.width - len(comp)} over width {M.width}; need rank {M.width - 1}"
        )
    return BitVec(comp[0], M.width)


def span_elements(basis: Sequence[int]) -> list[int]:
    """All 2^k combinations of the given independent vectors."""
    out = [0]
    for b in basis:
        out += [v ^ b for v in out]
    return out
