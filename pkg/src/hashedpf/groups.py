"""Finite abelian groups with integer encodings, for group-type oracles.

Each group encodes its elements as integers below ``2**width``; codes that are
not group elements are left fixed by every multiplication permutation, so
``mul_permutation`` is always a bijection of the register basis.
"""
from __future__ import annotations

import math

import numpy as np

from .gfpm import GFContext


class NotInGroup(ValueError):
    pass


class FiniteGroup:
    name = "group"
    identity: int
    width: int

    def op(self, u: int, v: int) -> int:
        raise NotImplementedError

    def contains(self, u: int) -> bool:
        raise NotImplementedError

    def elements(self) -> list[int]:
        raise NotImplementedError

    def inverse(self, u: int) -> int:
        raise NotImplementedError

    def power(self, u: int, e: int) -> int:
        if e < 0:
            u, e = self.inverse(u), -e
        out, base = self.identity, u
        while e:
            if e & 1:
                out = self.op(out, base)
            base = self.op(base, base)
            e >>= 1
        return out

    @property
    def order(self) -> int:
        return len(self.elements())

    @property
    def order_bits(self) -> int:
        return max(1, (self.order - 1).bit_length())

    def check(self, u: int):
        if not self.contains(u):
            raise NotInGroup(f"{u} is not an element of {self.name}")

    def mul_codes(self, codes: np.ndarray, c: int) -> np.ndarray:
        """Vectorised ``code -> code o c`` on group members (caller masks the rest)."""
        return np.array([self.op(int(u), c) for u in codes], dtype=np.int64)

    def member_mask(self, codes: np.ndarray) -> np.ndarray:
        return np.array([self.contains(int(u)) for u in codes], dtype=bool)

    def mul_permutation(self, c: int) -> np.ndarray:
        self.check(c)
        codes = np.arange(1 << self.width, dtype=np.int64)
        mask = self.member_mask(codes)
        out = codes.copy()
        out[mask] = self.mul_codes(codes[mask], c)
        return out


class MultiplicativeModN(FiniteGroup):
    """Z_N^* with residues as codes."""

    def __init__(self, N: int):
        if N < 2:
            raise ValueError("N must be >= 2")
        self.N = N
        self.name = f"Z_{N}^*"
        self.identity = 1
        self.width = (N - 1).bit_length()

    def op(self, u, v):
        return u * v % self.N

    def contains(self, u):
        return 0 <= u < self.N and math.gcd(u, self.N) == 1

    def inverse(self, u):
        self.check(u)
        return pow(u, -1, self.N)

    def elements(self):
        return [u for u in range(1, self.N) if math.gcd(u, self.N) == 1]

    def mul_codes(self, codes, c):
        return (np.asarray(codes, dtype=np.int64) * c) % self.N

    def member_mask(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        return (codes < self.N) & (np.gcd(codes, self.N) == 1)


class AdditiveModN(FiniteGroup):
    def __init__(self, N: int):
        self.N = N
        self.name = f"Z_{N}"
        self.identity = 0
        self.width = max(1, (N - 1).bit_length())

    def op(self, u, v):
        return (u + v) % self.N

    def contains(self, u):
        return 0 <= u < self.N

    def inverse(self, u):
        return (-u) % self.N

    def elements(self):
        return list(range(self.N))

    def mul_codes(self, codes, c):
        return (np.asarray(codes, dtype=np.int64) + c) % self.N

    def member_mask(self, codes):
        return np.asarray(codes) < self.N


class GFMultiplicative(FiniteGroup):
    """GF(p^m)^* with integer codes sum(c_i p^i)."""

    def __init__(self, ctx: GFContext):
        self.ctx = ctx
        self.name = f"GF({ctx.p}^{ctx.m})^*"
        self.identity = 1
        self.width = (ctx.order - 1).bit_length()

    def op(self, u, v):
        return int(self.ctx.mul_codes(u, v))

    def contains(self, u):
        return 1 <= u < self.ctx.order

    def inverse(self, u):
        self.check(u)
        exp, log = self.ctx._tables
        return int(exp[(-log[u]) % (self.ctx.order - 1)])

    def elements(self):
        return list(range(1, self.ctx.order))

    @property
    def order(self):
        return self.ctx.order - 1

    def mul_codes(self, codes, c):
        return self.ctx.mul_codes(codes, c)

    def member_mask(self, codes):
        codes = np.asarray(codes)
        return (codes >= 1) & (codes < self.ctx.order)


def prime_field(p: int) -> MultiplicativeModN:
    g = MultiplicativeModN(p)
    g.name = f"GF({p})^*"
    return g
