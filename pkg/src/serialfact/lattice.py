"""Cyclic right modules R/A: overideal lattices, uniseriality, homomorphisms.

Every homomorphism R/A -> R/B is determined by the image c + B of 1 + A, and
c defines one exactly when cA is contained in B.  Scanning one representative
c per residue class of B therefore enumerates all homomorphisms between
cyclic quotients.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ImproperIdeal, NotUniserial
from .ideals import (
    RightIdeal,
    _require_cap,
    _same_ring,
    enumerate_overideals,
    join_masks,
    principal_masks,
)


@dataclass(frozen=True)
class OverIdealLattice:
    base: RightIdeal
    members: tuple

    def __len__(self):
        return len(self.members)

    @property
    def is_chain(self) -> bool:
        return all(a <= b for a, b in zip(self.members, self.members[1:]))


def overideals(A: RightIdeal, cap: int | None = None) -> OverIdealLattice:
    """All right ideals B with A ⊆ B ⊆ R, sorted by (size, elements)."""
    return OverIdealLattice(A, tuple(enumerate_overideals(A, cap)))


def incomparable_pair(A: RightIdeal, cap: int | None = None):
    """Two incomparable overideals of A, or None if the lattice is a chain."""
    members = overideals(A, cap).members
    for a, b in zip(members, members[1:]):
        if not a <= b:
            return a, b
    return None


def is_uniserial_quotient(A: RightIdeal, cap: int | None = None) -> bool:
    if not A.is_proper:
        raise ImproperIdeal("R/R is the zero module; uniseriality is not evaluated")
    _require_cap(A.ring, cap)
    return overideals(A, cap).is_chain


def chain_length(A: RightIdeal, cap: int | None = None) -> int:
    """Composition length of a uniserial R/A."""
    if not is_uniserial_quotient(A, cap):
        raise NotUniserial("R/A is not uniserial")
    return len(overideals(A, cap)) - 1


@dataclass(frozen=True)
class HomWitness:
    """The map r + A -> cr + B."""

    c: int
    is_well_defined: bool
    is_mono: bool
    is_epi: bool

    @property
    def is_iso(self) -> bool:
        return self.is_well_defined and self.is_mono and self.is_epi

    def to_dict(self) -> dict:
        return {"c": self.c, "well_defined": self.is_well_defined, "mono": self.is_mono, "epi": self.is_epi}


def coset_representatives(B: RightIdeal) -> np.ndarray:
    """Minimal element index of every residue class of B."""
    ring = B.ring
    covered = np.zeros(ring.order, dtype=bool)
    reps = []
    for x in range(ring.order):
        if not covered[x]:
            reps.append(x)
            covered[ring.add(x, B.indices)] = True
    return np.array(reps, dtype=np.int64)


def hom_witness(A: RightIdeal, B: RightIdeal, c: int) -> HomWitness:
    """Flags of the candidate map given by left multiplication by c."""
    ring = _same_ring(A, B)
    b_flags = B.flags
    defined = bool(b_flags[ring.mul(int(c), A.indices)].all())
    kernel = b_flags[ring.mul(int(c), ring.elements)]
    mono = defined and bool(np.array_equal(kernel, A.flags))
    image = principal_masks(ring)[int(c)]
    epi = defined and image.bit_count() * B.size == ring.order * (image & B.mask).bit_count()
    return HomWitness(int(c), defined, mono, epi)


def cyclic_homs(A: RightIdeal, B: RightIdeal, cap: int | None = None) -> list:
    """One witness per well-defined homomorphism R/A -> R/B."""
    ring = _same_ring(A, B)
    _require_cap(ring, cap)
    key = ("homs", A.mask, B.mask)
    if key not in ring._memo:
        reps = coset_representatives(B)
        b_flags = B.flags
        defined = b_flags[ring.mul(reps[:, None], A.indices[None, :])].all(axis=1)
        found = [hom_witness(A, B, int(c)) for c in reps[defined]]
        ring._memo[key] = found
    return list(ring._memo[key])


def are_similar(A: RightIdeal, B: RightIdeal, cap: int | None = None) -> bool:
    """R/A and R/B isomorphic."""
    _same_ring(A, B)
    if A.size != B.size:
        return False
    return any(h.is_iso for h in cyclic_homs(A, B, cap))


def exists_mono(A: RightIdeal, B: RightIdeal, cap: int | None = None) -> bool:
    return any(h.is_mono for h in cyclic_homs(A, B, cap))


def exists_epi(A: RightIdeal, B: RightIdeal, cap: int | None = None) -> bool:
    return any(h.is_epi for h in cyclic_homs(A, B, cap))


def bezout_witness(A: RightIdeal, cap: int | None = None):
    """A pair (x, y) such that xR + yR + A is not of the form zR + A, else None.

    For a finite module, every finitely generated submodule is generated by
    finitely many elements, so cyclicity of all two-generated submodules
    gives cyclicity of all of them by induction on the number of generators.
    """
    ring = A.ring
    _require_cap(ring, cap)
    cyclic: dict[int, int] = {}
    for x, p in enumerate(principal_masks(ring)):
        m = join_masks(ring, p, A.mask)
        cyclic.setdefault(m, x)
    lattice = [m.mask for m in overideals(A, cap).members]
    items = list(cyclic.items())
    for i, (m1, x) in enumerate(items):
        for m2, y in items[i + 1:]:
            if _lattice_join(lattice, m1, m2) not in cyclic:
                return x, y
    return None


def _lattice_join(lattice, m1: int, m2: int) -> int:
    # the join is the member containing both whose size is |m1||m2| / |m1 ∩ m2|
    size = m1.bit_count() * m2.bit_count() // (m1 & m2).bit_count()
    union = m1 | m2
    for m in lattice:
        if m.bit_count() == size and union & ~m == 0:
            return m
    raise AssertionError("join missing from overideal lattice")


def is_bezout_quotient(A: RightIdeal, cap: int | None = None) -> bool:
    return bezout_witness(A, cap) is None
