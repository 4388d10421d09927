"""Rigid factorizations in the integers.

In Z the general notions collapse: every element is right invariant, units
are +1 and -1, "right coprime" means gcd 1, and a rigid element is a prime
power up to sign.  A semirigid integer is one with at least two distinct
prime divisors; its rigid factorization is the list of its prime-power parts,
normalized positive with increasing primes and the sign kept as the unit.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import FactorBudgetExceeded, InvertibleInput, NotADivisor, NotFactorable, ZeroInput

DEFAULT_TRIAL_LIMIT = 10**6
MAX_ABS_INPUT = 2**63 - 1


class ElementClass(str, enum.Enum):
    INVERTIBLE = "Invertible"
    RIGID = "Rigid"
    SEMIRIGID = "Semirigid"


@dataclass(frozen=True)
class PrimePowerFactorization:
    sign: int
    parts: tuple  # ((p, t), ...) with strictly increasing p

    @property
    def value(self) -> int:
        return self.sign * math.prod(p**t for p, t in self.parts)

    @property
    def prime_powers(self) -> list:
        return [p**t for p, t in self.parts]

    def to_dict(self) -> dict:
        return {"unit": self.sign, "parts": [[p, t] for p, t in self.parts]}


@dataclass(frozen=True)
class RigidFactorization:
    unit: int
    factors: tuple
    parts: tuple

    def to_dict(self) -> dict:
        return {"unit": self.unit, "factors": list(self.factors), "parts": [[p, t] for p, t in self.parts]}


@dataclass(frozen=True)
class DivisorRefinement:
    element_class: ElementClass
    factors: tuple
    parent_indices: tuple

    def to_dict(self) -> dict:
        return {
            "class": self.element_class.value,
            "factors": list(self.factors),
            "parent_indices": list(self.parent_indices),
        }


@lru_cache(maxsize=None)
def _primes_up_to(limit: int) -> tuple:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return tuple(int(p) for p in np.flatnonzero(sieve))


def factor_int(a: int, trial_limit: int = DEFAULT_TRIAL_LIMIT) -> PrimePowerFactorization:
    """Canonical sign and prime-power parts of a nonzero integer.

    Trial division by primes up to ``trial_limit``; raises
    FactorBudgetExceeded when a cofactor could still have a prime factor
    beyond that limit.
    """
    a = int(a)
    if a == 0:
        raise ZeroInput("0 has no factorization")
    m = abs(a)
    if m > MAX_ABS_INPUT:
        raise ValueError(f"|a| exceeds {MAX_ABS_INPUT}")
    parts = []
    for p in _primes_up_to(trial_limit):
        if p * p > m:
            break
        if m % p == 0:
            t = 0
            while m % p == 0:
                m //= p
                t += 1
            parts.append((p, t))
    if m > 1:
        if math.isqrt(m) > trial_limit:
            raise FactorBudgetExceeded(f"cofactor {m} may have a prime factor above {trial_limit}")
        parts.append((m, 1))
    return PrimePowerFactorization(1 if a > 0 else -1, tuple(parts))


def classify_int(a: int) -> ElementClass:
    parts = factor_int(a).parts
    if not parts:
        return ElementClass.INVERTIBLE
    if len(parts) == 1:
        return ElementClass.RIGID
    return ElementClass.SEMIRIGID


def rigid_factorization_int(a: int) -> RigidFactorization:
    """Unit times pairwise coprime prime powers; a rigid input gives one factor."""
    fact = factor_int(a)
    if not fact.parts:
        raise NotFactorable(f"{a} is invertible")
    factors = tuple(fact.prime_powers)
    # coprimality and the product, re-checked on the normalized output
    assert all(math.gcd(x, y) == 1 for i, x in enumerate(factors) for y in factors[i + 1:])
    assert fact.sign * math.prod(factors) == a
    return RigidFactorization(fact.sign, factors, fact.parts)


def _split_divisor(a: int, b: int):
    if a == 0 or b == 0:
        raise ZeroInput("inputs must be nonzero")
    if a % b != 0:
        raise NotADivisor(f"{b} does not divide {a}")
    parent = factor_int(a)
    if not parent.parts:
        raise NotFactorable(f"{a} is invertible")
    pieces = [(i, math.gcd(abs(b), q)) for i, q in enumerate(parent.prime_powers)]
    return [(i, g) for i, g in pieces if g != 1]


def left_divisor_factorization_int(a: int, b: int) -> list:
    """b_i = gcd(b, a_i) over the rigid factors a_i of a, trivial ones omitted.

    The product of the returned factors is |b|; an invertible b gives [].
    """
    pieces = [g for _, g in _split_divisor(a, b)]
    assert math.prod(pieces) == abs(b)
    return pieces


def rigid_refinement_of_divisor(a: int, b: int) -> DivisorRefinement:
    """Class of a divisor b of a, its factors and the parent factors they divide."""
    pieces = _split_divisor(a, b)
    if not pieces:
        raise InvertibleInput(f"{b} is invertible")
    kind = ElementClass.RIGID if len(pieces) == 1 else ElementClass.SEMIRIGID
    return DivisorRefinement(kind, tuple(g for _, g in pieces), tuple(i for i, _ in pieces))


def divisors(n: int) -> list:
    """Positive divisors of n in increasing order, by scanning up to sqrt(n)."""
    n = abs(int(n))
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


@dataclass
class DivisorLatticeReport:
    value: int
    divisor_count: int
    chain_sizes: tuple
    bijective: bool
    order_preserving: bool
    lattice_preserving: bool

    @property
    def ok(self) -> bool:
        return self.bijective and self.order_preserving and self.lattice_preserving

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "divisor_count": self.divisor_count,
            "chain_sizes": list(self.chain_sizes),
            "bijective": self.bijective,
            "order_preserving": self.order_preserving,
            "lattice_preserving": self.lattice_preserving,
        }


def _valuation(d: int, p: int) -> int:
    t = 0
    while d % p == 0:
        d //= p
        t += 1
    return t


def divisor_lattice_product_check(a: int, trial_limit: int = DEFAULT_TRIAL_LIMIT) -> DivisorLatticeReport:
    """Check d -> (v_p(d))_p is a lattice isomorphism onto a product of chains.

    Divisibility corresponds to componentwise order, gcd to componentwise
    min and lcm to componentwise max.
    """
    fact = factor_int(a, trial_limit)
    n = abs(int(a))
    chain_sizes = tuple(t + 1 for _, t in fact.parts)
    divs = divisors(n)
    primes = [p for p, _ in fact.parts]
    vecs = np.array([[_valuation(d, p) for p in primes] for d in divs], dtype=np.int64).reshape(len(divs), len(primes))
    bounds = np.array([t for _, t in fact.parts], dtype=np.int64)
    in_box = bool(((vecs >= 0) & (vecs <= bounds)).all())
    distinct = len({tuple(v) for v in vecs.tolist()}) == len(divs)
    bijective = in_box and distinct and len(divs) == math.prod(chain_sizes)

    d = np.array(divs, dtype=np.int64)
    divides = (d[None, :] % d[:, None]) == 0
    below = (vecs[:, None, :] <= vecs[None, :, :]).all(axis=2)
    order_preserving = bool(np.array_equal(divides, below))

    index = {v: i for i, v in enumerate(divs)}
    g = np.gcd(d[:, None], d[None, :])
    lcm = d[:, None] // g * d[None, :]
    gi = np.vectorize(index.__getitem__)(g) if len(divs) > 1 else np.zeros((1, 1), dtype=np.int64)
    li = np.vectorize(index.__getitem__)(lcm) if len(divs) > 1 else np.zeros((1, 1), dtype=np.int64)
    meet = np.minimum(vecs[:, None, :], vecs[None, :, :])
    join = np.maximum(vecs[:, None, :], vecs[None, :, :])
    lattice_preserving = bool(np.array_equal(vecs[gi], meet) and np.array_equal(vecs[li], join))
    return DivisorLatticeReport(n, len(divs), chain_sizes, bijective, order_preserving, lattice_preserving)
