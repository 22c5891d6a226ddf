"""Arithmetic in GF(p^m), the norm map to GF(p)*, and the hashed DDH distinguisher.

Elements are coefficient tuples (c_0, ..., c_{m-1}) over GF(p), lowest degree
first. The integer code of an element is sum(c_i * p^i); code 1 is the unit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class MixedContextError(ValueError):
    pass


class DegenerateParameters(ValueError):
    pass


def is_prime(n: int) -> bool:
    """Trial division; fine for the desk-scale moduli used here."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(p): lists of coefficients, lowest degree first --------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, mod, p):
    a = _trim([c % p for c in a])
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], -1, p)
    while len(a) - 1 >= dm:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(mod):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def _monic_polys(degree: int, p: int):
    for code in range(p**degree):
        lower = [(code // p**i) % p for i in range(degree)]
        yield lower + [1]


def is_irreducible(poly, p: int) -> bool:
    """Exhaustive check: no monic factor of degree 1..deg/2 divides ``poly``."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(d, p):
            if not _poly_mod(list(poly), f, p):
                return False
    return True


def least_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree m (by integer code)."""
    for poly in _monic_polys(m, p):
        if is_irreducible(poly, p):
            return tuple(poly)
    raise ValueError(f"no irreducible polynomial of degree {m} over GF({p})")


@dataclass(frozen=True)
class GFElement:
    coeffs: tuple[int, ...]
    ctx: "GFContext" = field(repr=False, compare=False)

    @property
    def code(self) -> int:
        return sum(c * self.ctx.p**i for i, c in enumerate(self.coeffs))

    def __eq__(self, other):
        return (
            isinstance(other, GFElement)
            and self.ctx.key == other.ctx.key
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ctx.key, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def in_base_field(self) -> bool:
        return not any(self.coeffs[1:])


class GFContext:
    def __init__(self, p: int, m: int, modulus=None):
        if p < 3 or not is_prime(p):
            raise ValueError("p must be an odd prime")
        if m < 1:
            raise ValueError("m must be >= 1")
        self.p, self.m = p, m
        if modulus is None:
            modulus = least_irreducible(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if not is_irreducible(list(modulus), p):
            raise ValueError("modulus is reducible")
        self.modulus = modulus

    def __repr__(self):
        return f"GFContext(p={self.p}, m={self.m}, modulus={self.modulus})"

    @property
    def key(self):
        return (self.p, self.m, self.modulus)

    @property
    def order(self) -> int:
        return self.p**self.m

    @property
    def q1(self) -> int:
        return (self.p**self.m - 1) // (self.p - 1)

    @property
    def q2(self) -> int:
        return (self.p - 1) // 2

    @property
    def ddh_valid(self) -> bool:
        return is_prime(self.q1) and is_prime(self.q2)

    def element(self, coeffs) -> GFElement:
        coeffs = [int(c) % self.p for c in coeffs]
        if len(coeffs) > self.m:
            coeffs = _poly_mod(coeffs, list(self.modulus), self.p)
        coeffs = coeffs + [0] * (self.m - len(coeffs))
        return GFElement(tuple(coeffs), self)

    def from_code(self, code: int) -> GFElement:
        if not 0 <= code < self.order:
            raise ValueError("code out of range")
        return GFElement(tuple((code // self.p**i) % self.p for i in range(self.m)), self)

    def scalar(self, c: int) -> GFElement:
        return self.element([c])

    @property
    def one(self) -> GFElement:
        return self.scalar(1)

    def random_nonzero(self, rng) -> GFElement:
        return self.from_code(int(rng.integers(1, self.order)))

    @cached_property
    def _tables(self):
        """exp/log tables over a primitive element (codes), built with gf_mul."""
        n = self.order - 1
        factors = prime_factors(n)
        for code in range(2, self.order):
            gamma = self.from_code(code)
            if all(gf_pow(self, gamma, n // f) != self.one for f in factors):
                break
        else:  # GF(3) with m=1 has primitive element 2 caught above; unreachable otherwise
            gamma = self.from_code(self.order - 1)
        exp = np.zeros(n, dtype=np.int64)
        log = np.full(self.order, -1, dtype=np.int64)
        x = self.one
        for i in range(n):
            exp[i] = x.code
            log[x.code] = i
            x = gf_mul(self, x, gamma)
        return exp, log

    def mul_codes(self, a, b):
        """Vectorised multiplication on integer codes (0 is the zero element)."""
        exp, log = self._tables
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = exp[(log[a] + log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, out)


def _check(ctx: GFContext, *xs: GFElement):
    for x in xs:
        if x.ctx.key != ctx.key:
            raise MixedContextError("operands belong to different fields")


def gf_mul(ctx: GFContext, a: GFElement, b: GFElement) -> GFElement:
    _check(ctx, a, b)
    prod = [0] * (2 * ctx.m - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                prod[i + j] += x * y
    return ctx.element(_poly_mod(prod, list(ctx.modulus), ctx.p))


def gf_pow(ctx: GFContext, a: GFElement, e: int) -> GFElement:
    _check(ctx, a)
    if e < 0:
        a = gf_inv(ctx, a)
        e = -e
    result = ctx.one
    base = a
    while e:
        if e & 1:
            result = gf_mul(ctx, result, base)
        base = gf_mul(ctx, base, base)
        e >>= 1
    return result


def gf_inv(ctx: GFContext, a: GFElement) -> GFElement:
    if a.is_zero():
        raise ZeroDivisionError("zero has no inverse")
    return gf_pow(ctx, a, ctx.order - 2)


def norm(ctx: GFContext, x: GFElement) -> int:
    """N(x) = x^((p^m - 1)/(p - 1)), returned as a residue in GF(p)*."""
    if x.is_zero():
        raise ValueError("norm of zero is undefined")
    y = gf_pow(ctx, x, ctx.q1)
    assert y.in_base_field(), "norm left the base field"
    return y.coeffs[0]


def find_ddh_params(p_max: int, m_max: int) -> list[tuple[int, int]]:
    out = []
    for p in range(3, p_max + 1, 2):
        if not is_prime(p):
            continue
        for m in range(2, m_max + 1):
            q1 = (p**m - 1) // (p - 1)
            if is_prime(q1) and is_prime((p - 1) // 2):
                out.append((p, m))
    return out


def element_order(ctx: GFContext, x: GFElement) -> int:
    n = ctx.order - 1
    d = n
    for f in prime_factors(n):
        while d % f == 0 and gf_pow(ctx, x, d // f) == ctx.one:
            d //= f
    return d


def find_qr_generator(ctx: GFContext, rng) -> GFElement:
    """Square of a random primitive element; generates QR of order q1*q2."""
    n = ctx.order - 1
    while True:
        gamma = ctx.random_nonzero(rng)
        if element_order(ctx, gamma) == n:
            return gf_mul(ctx, gamma, gamma)


def base_field_dlog_bruteforce(p: int, base: int, target: int, order: int) -> int:
    x = 1
    for e in range(order):
        if x == target:
            return e
        x = x * base % p
    raise ValueError(f"{target} is not a power of {base} mod {p}")


@dataclass
class DDHVerdict:
    is_ddh: bool
    logs_mod_q2: tuple[int, int, int]
    hashed: tuple[int, int, int, int]
    samples_used: int

    @property
    def label(self) -> str:
        return "DDH" if self.is_ddh else "random"


def ddh_distinguish(ctx: GFContext, g, ga, gb, gc, rng, samples: int = 24) -> DDHVerdict:
    """Decide DDH by norm-hashing to GF(p)* and solving three logs mod q2 there.

    The logs come from the Ekera-Hastad engine over GF(p)* and are checked
    against exhaustive search.
    """
    from .ekera import dlog_via_eh

    _check(ctx, g, ga, gb, gc)
    hg, ha, hb, hc = (norm(ctx, v) for v in (g, ga, gb, gc))
    q2 = ctx.q2
    # order of hg in GF(p)*
    order = 1
    x = hg
    while x != 1:
        x = x * hg % ctx.p
        order += 1
    if order < q2:
        raise DegenerateParameters(f"hashed base has order {order} < q2 = {q2}")
    logs = []
    used = 0
    for target in (ha, hb, hc):
        d, n_used = dlog_via_eh(ctx.p, hg, target, order, rng, samples=samples)
        oracle = base_field_dlog_bruteforce(ctx.p, hg, target, order)
        if d % order != oracle:
            raise AssertionError(f"quantum dlog {d} disagrees with exhaustive search {oracle}")
        logs.append(d % q2)
        used += n_used
    a, b, c = logs
    return DDHVerdict((a * b - c) % q2 == 0, (a, b, c), (hg, ha, hb, hc), used)


def ddh_function(ctx: GFContext, g, ga, x: int, y: int) -> GFElement:
    """f_{g,g^a}(x, y) = g^x * (g^a)^y."""
    return gf_mul(ctx, gf_pow(ctx, g, x), gf_pow(ctx, ga, y))


def qubit_ledger(ctx: GFContext) -> dict:
    plain = math.ceil(math.log2(ctx.order - 1))
    hashed = math.ceil(math.log2(ctx.p - 1))
    return {
        "plain_output_bits": plain,
        "hashed_output_bits": hashed,
        "plain_total": 1 + plain,
        "hashed_total": 1 + hashed,
        "ratio": (1 + hashed) / (1 + plain),
    }


@dataclass
class DDHInstance:
    g: GFElement
    ga: GFElement
    gb: GFElement
    gc: GFElement
    a: int
    b: int
    c: int
    planted_ddh: bool


def plant_ddh(ctx: GFContext, g: GFElement, rng, ddh: bool) -> DDHInstance:
    """(g, g^a, g^b, g^c) with c = ab mod ord(g) when ``ddh``, else c uniform."""
    order = (ctx.order - 1) // 2
    a, b = (int(v) for v in rng.integers(0, order, size=2))
    c = a * b % order if ddh else int(rng.integers(0, order))
    return DDHInstance(g, gf_pow(ctx, g, a), gf_pow(ctx, g, b), gf_pow(ctx, g, c), a, b, c, ddh)
