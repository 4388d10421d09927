"""Right ideals as canonical element bitsets, and the ideal calculus."""
from __future__ import annotations

import itertools
import math
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, CapExceeded, ImproperMember, NotTwoSided, RingMismatch
from .rings import (
    DEFAULT_CAP,
    Ring,
    additive_span,
    bools_to_mask,
    mask_to_bools,
    mask_to_indices,
    right_closure,
)

DEFAULT_GENERATION_BUDGET = 10**6


class RightIdeal:
    """A right ideal of ``ring`` stored as a bitmask over element indices.

    Two ideals are equal when they live in the same ring object and have the
    same elements; recorded generators do not take part in equality.
    """

    __slots__ = ("ring", "mask", "generators", "_indices", "_two_sided")

    def __init__(self, ring: Ring, mask: int, generators: Sequence[int] = ()):
        self.ring = ring
        self.mask = mask
        self.generators = tuple(int(g) for g in generators)
        self._indices = None
        self._two_sided = None

    @classmethod
    def from_flags(cls, ring, flags, generators=()):
        return cls(ring, bools_to_mask(flags), generators)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @property
    def indices(self) -> np.ndarray:
        if self._indices is None:
            self._indices = mask_to_indices(self.mask, self.ring.order)
        return self._indices

    @property
    def flags(self) -> np.ndarray:
        return mask_to_bools(self.mask, self.ring.order)

    @property
    def elements(self) -> tuple:
        return tuple(int(i) for i in self.indices)

    @property
    def is_proper(self) -> bool:
        return self.size < self.ring.order

    @property
    def is_zero(self) -> bool:
        return self.mask == 1 << self.ring.zero

    def sort_key(self):
        return (self.size, self.elements)

    def __contains__(self, x) -> bool:
        return bool(self.mask >> int(x) & 1)

    def __le__(self, other: "RightIdeal") -> bool:
        _same_ring(self, other)
        return self.mask & ~other.mask == 0

    def __ge__(self, other: "RightIdeal") -> bool:
        return other <= self

    def __lt__(self, other: "RightIdeal") -> bool:
        return self <= other and self.mask != other.mask

    def __gt__(self, other: "RightIdeal") -> bool:
        return other < self

    def __eq__(self, other) -> bool:
        if not isinstance(other, RightIdeal):
            return NotImplemented
        return self.ring is other.ring and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __repr__(self):
        if self.size <= 12:
            body = "{" + ", ".join(map(str, self.elements)) + "}"
        else:
            body = f"<{self.size} elements>"
        return f"RightIdeal({body})"

    def to_dict(self) -> dict:
        return {"elements": list(self.elements), "generators": list(self.generators)}


def _same_ring(*ideals: RightIdeal) -> Ring:
    ring = ideals[0].ring
    for other in ideals[1:]:
        if other.ring is not ring:
            raise RingMismatch("ideals belong to different rings")
    return ring


def _require_cap(ring: Ring, cap: int | None):
    cap = DEFAULT_CAP if cap is None else cap
    if ring.order > cap:
        raise CapExceeded(f"{ring.label} has {ring.order} elements, cap is {cap}")


# ---------------------------------------------------------------------------
# construction


def right_ideal(ring: Ring, gens: Iterable[int]) -> RightIdeal:
    """Smallest right ideal containing ``gens``."""
    gens = [int(g) for g in gens]
    for g in gens:
        if not 0 <= g < ring.order:
            raise ValueError(f"generator {g} outside 0..{ring.order - 1}")
    return RightIdeal.from_flags(ring, right_closure(ring, gens), gens)


def ideal_from_elements(ring: Ring, elements: Iterable[int]) -> RightIdeal:
    """Wrap an explicit element set, refusing sets that are not right ideals."""
    elements = sorted({int(x) for x in elements})
    ideal = right_ideal(ring, elements)
    if ideal.size != len(elements):
        raise ValueError("element set is not closed under addition and right multiplication")
    return RightIdeal(ideal.ring, ideal.mask, ())


def zero_ideal(ring: Ring) -> RightIdeal:
    return RightIdeal(ring, 1 << ring.zero, ())


def whole_ring(ring: Ring) -> RightIdeal:
    return RightIdeal(ring, (1 << ring.order) - 1, (ring.one,))


def principal_masks(ring: Ring) -> list:
    """``masks[x]`` is the bitmask of xR, for every element x."""
    memo = ring._memo
    if "principal" not in memo:
        # {xr : r in R} is already additive: xr + xs = x(r + s)
        masks = []
        for x in range(ring.order):
            flags = np.zeros(ring.order, dtype=bool)
            flags[ring.mul(x, ring.elements)] = True
            masks.append(bools_to_mask(flags))
        memo["principal"] = masks
    return memo["principal"]


def join_masks(ring: Ring, m1: int, m2: int) -> int:
    """Bitmask of the sum of two right ideals given as bitmasks."""
    if m2 & ~m1 == 0:
        return m1
    if m1 & ~m2 == 0:
        return m2
    a = mask_to_indices(m1, ring.order)
    b = mask_to_indices(m2, ring.order)
    flags = np.zeros(ring.order, dtype=bool)
    flags[np.asarray(ring.add(a[:, None], b[None, :])).ravel()] = True
    return bools_to_mask(flags)


def sums_to_whole(A: RightIdeal, B: RightIdeal) -> bool:
    """A + B = R, decided by |A + B| = |A||B| / |A ∩ B| (exact for subgroups)."""
    ring = _same_ring(A, B)
    return A.size * B.size == ring.order * (A.mask & B.mask).bit_count()


# ---------------------------------------------------------------------------
# calculus


def ideal_sum(A: RightIdeal, B: RightIdeal) -> RightIdeal:
    ring = _same_ring(A, B)
    return RightIdeal(ring, join_masks(ring, A.mask, B.mask), A.generators + B.generators)


def ideal_intersection(A: RightIdeal, B: RightIdeal) -> RightIdeal:
    ring = _same_ring(A, B)
    return RightIdeal(ring, A.mask & B.mask)


def ideal_product(A: RightIdeal, B: RightIdeal) -> RightIdeal:
    """Additive closure of all products ab with a in A, b in B."""
    ring = _same_ring(A, B)
    key = ("product", A.mask, B.mask)
    mask = ring._memo.get(key)
    if mask is None:
        products = ring.mul(A.indices[:, None], B.indices[None, :])
        mask = bools_to_mask(additive_span(ring, products))
        ring._memo[key] = mask
    return RightIdeal(ring, mask)


def iterated_product(ideals: Sequence[RightIdeal]) -> RightIdeal:
    """Left-to-right product A1 A2 ... An."""
    result = ideals[0]
    for nxt in ideals[1:]:
        result = ideal_product(result, nxt)
    return result


def is_two_sided(A: RightIdeal) -> bool:
    """True iff r·a lies in A for every ring element r and every a in A."""
    if A._two_sided is None:
        ring = A.ring
        key = ("two-sided", A.mask)
        if key not in ring._memo:
            flags = A.flags
            ok = True
            for start in range(0, ring.order, 256):
                rows = ring.elements[start:start + 256, None]
                if not flags[ring.mul(rows, A.indices[None, :])].all():
                    ok = False
                    break
            ring._memo[key] = ok
        A._two_sided = ring._memo[key]
    return A._two_sided


def two_sided_witness(A: RightIdeal):
    """A pair (r, a) with r·a outside A, or None when A is two-sided."""
    ring = A.ring
    flags = A.flags
    for r in range(ring.order):
        bad = ~flags[ring.mul(r, A.indices)]
        if bad.any():
            return r, int(A.indices[np.argmax(bad)])
    return None


def is_coindependent(family: Sequence[RightIdeal]) -> bool:
    """A_i + (intersection of the others) = R for every i; vacuous for n <= 1."""
    family = list(family)
    if family:
        _same_ring(*family)
    for i, member in enumerate(family):
        if not member.is_proper:
            raise ImproperMember(f"family member {i} is the whole ring")
    if len(family) <= 1:
        return True
    ring = family[0].ring
    full = (1 << ring.order) - 1
    for i, member in enumerate(family):
        others = full
        for j, other in enumerate(family):
            if j != i:
                others &= other.mask
        if not sums_to_whole(member, RightIdeal(ring, others)):
            return False
    return True


def comaximality_criterion(family: Sequence[RightIdeal]) -> bool:
    """Pairwise comaximality for a family of proper two-sided ideals."""
    family = list(family)
    if family:
        _same_ring(*family)
    for i, member in enumerate(family):
        if not member.is_proper:
            raise ImproperMember(f"family member {i} is the whole ring")
        if not is_two_sided(member):
            raise NotTwoSided(f"family member {i} is not two-sided")
    return all(sums_to_whole(a, b) for a, b in itertools.combinations(family, 2))


def annihilator_of_quotient(A: RightIdeal) -> RightIdeal:
    """{ r : x·r in A for every x }, the annihilator of the module R/A."""
    ring = A.ring
    flags = A.flags
    keep = np.ones(ring.order, dtype=bool)
    e = ring.elements
    for start in range(0, ring.order, 256):
        keep &= flags[ring.mul(e[start:start + 256, None], e[None, :])].all(axis=0)
    ann = RightIdeal.from_flags(ring, keep)
    ann._two_sided = True
    return ann


# ---------------------------------------------------------------------------
# enumeration


def enumerate_overideals(A: RightIdeal, cap: int | None = None) -> list:
    """Every right ideal containing A, sorted by (size, elements).

    Worklist over joins with principal right ideals: each overideal is A plus
    a finite sum of principal right ideals, so the search is complete.
    """
    ring = A.ring
    _require_cap(ring, cap)
    key = ("overideals", A.mask)
    if key not in ring._memo:
        principals = []
        seen_p = set()
        for m in principal_masks(ring):
            if m not in seen_p and m & ~A.mask:
                seen_p.add(m)
                principals.append(m)
        found = {A.mask}
        queue = [A.mask]
        while queue:
            current = queue.pop()
            for p in principals:
                if p & ~current == 0:
                    continue
                joined = join_masks(ring, current, p)
                if joined not in found:
                    found.add(joined)
                    queue.append(joined)
        members = [RightIdeal(ring, m) for m in found]
        members.sort(key=RightIdeal.sort_key)
        ring._memo[key] = [m.mask for m in members]
    return [RightIdeal(ring, m) for m in ring._memo[key]]


def all_right_ideals(ring: Ring, cap: int | None = None) -> list:
    return enumerate_overideals(zero_ideal(ring), cap)


def maximal_among(ideals: Sequence[RightIdeal]) -> list:
    """Proper members not strictly contained in another proper member."""
    proper = [I for I in ideals if I.is_proper]
    return [I for I in proper if not any(I < J for J in proper)]


def maximal_right_ideals(ring: Ring, cap: int | None = None) -> list:
    return maximal_among(all_right_ideals(ring, cap))


def generation_number_at_most(A: RightIdeal, k: int, budget: int = DEFAULT_GENERATION_BUDGET):
    """Some k elements generating A, or None when no k elements do.

    The closure of a generator tuple depends only on the principal right
    ideals of its entries, so tuples are searched over one representative
    (minimal index) per distinct principal ideal, in lexicographic order.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    ring = A.ring
    if k == 0:
        return [] if A.is_zero else None
    principals = principal_masks(ring)
    reps: dict[int, int] = {}
    for x in A.elements:
        reps.setdefault(principals[x], x)
    candidates = sorted(reps.items(), key=lambda item: item[1])
    space = math.comb(len(candidates) + k - 1, k)
    if space > budget:
        raise BudgetExceeded(f"{space} generator tuples exceed budget {budget}")
    for combo in itertools.combinations_with_replacement(candidates, k):
        mask = combo[0][0]
        for m, _ in combo[1:]:
            mask = join_masks(ring, mask, m)
        if mask == A.mask:
            return [x for _, x in combo]
    return None


def is_right_chain(ring: Ring, cap: int | None = None) -> bool:
    ideals = all_right_ideals(ring, cap)
    return all(a <= b for a, b in zip(ideals, ideals[1:]))


def is_right_duo(ring: Ring, cap: int | None = None) -> bool:
    return all(is_two_sided(I) for I in all_right_ideals(ring, cap))
