"""Finite unital rings on a canonical element index.

Every ring has carrier ``0..order-1``.  Arithmetic is realized structurally
from the constructor tree; below ``table_threshold`` elements the add/mul
tables are memoized.  All operations accept Python ints or numpy index
arrays and broadcast like numpy ufuncs.

Index encodings:

* ``ZMod(n)``: the residue itself.
* ``Product``: mixed radix, first factor least significant.
* ``MatrixRing`` / ``UpperTriangular``: base-``|base|`` digits over the stored
  entries in row-major order, first stored entry least significant.
* ``Quotient``: rank of the minimal-index coset representative.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np

from .errors import CapExceeded, MalformedSpec, QuotientGeneratorsNotTwoSided

DEFAULT_CAP = 4096
TABLE_THRESHOLD = 512


# ---------------------------------------------------------------------------
# constructor tree


@dataclass(frozen=True)
class ZMod:
    n: int


@dataclass(frozen=True)
class MatrixRing:
    size: int
    base: "RingSpec"


@dataclass(frozen=True)
class UpperTriangular:
    size: int
    base: "RingSpec"


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))


@dataclass(frozen=True)
class Quotient:
    base: "RingSpec"
    ideal_generators: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "ideal_generators", tuple(int(g) for g in self.ideal_generators))


RingSpec = Union[ZMod, MatrixRing, UpperTriangular, Product, Quotient]


def spec_to_dict(spec: RingSpec) -> dict:
    """JSON-ready form of a spec tree (inverse of the CLI parser)."""
    if isinstance(spec, ZMod):
        return {"type": "zmod", "n": spec.n}
    if isinstance(spec, MatrixRing):
        return {"type": "matrix", "size": spec.size, "base": spec_to_dict(spec.base)}
    if isinstance(spec, UpperTriangular):
        return {"type": "triangular", "size": spec.size, "base": spec_to_dict(spec.base)}
    if isinstance(spec, Product):
        return {"type": "product", "factors": [spec_to_dict(f) for f in spec.factors]}
    if isinstance(spec, Quotient):
        return {
            "type": "quotient",
            "base": spec_to_dict(spec.base),
            "ideal_generators": list(spec.ideal_generators),
        }
    raise MalformedSpec(f"not a ring spec: {spec!r}")


def spec_label(spec: RingSpec) -> str:
    """Short human-readable name, e.g. ``T3(Z/2)``."""
    if isinstance(spec, ZMod):
        return f"Z/{spec.n}"
    if isinstance(spec, MatrixRing):
        return f"M{spec.size}({spec_label(spec.base)})"
    if isinstance(spec, UpperTriangular):
        return f"T{spec.size}({spec_label(spec.base)})"
    if isinstance(spec, Product):
        return " x ".join(spec_label(f) for f in spec.factors)
    if isinstance(spec, Quotient):
        gens = ",".join(str(g) for g in spec.ideal_generators)
        return f"({spec_label(spec.base)})/<{gens}>"
    return repr(spec)


# ---------------------------------------------------------------------------
# bitset helpers


def bools_to_mask(flags: np.ndarray) -> int:
    return int.from_bytes(np.packbits(np.asarray(flags, dtype=bool), bitorder="little").tobytes(), "little")


def mask_to_bools(mask: int, n: int) -> np.ndarray:
    raw = np.frombuffer(mask.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def mask_to_indices(mask: int, n: int) -> np.ndarray:
    return np.flatnonzero(mask_to_bools(mask, n))


def indices_to_mask(indices) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << int(i)
    return mask


# ---------------------------------------------------------------------------
# rings


class Ring:
    """Base class: a finite unital ring with canonical element indices.

    Subclasses provide ``_add``, ``_mul``, ``_neg`` (vectorized over index
    arrays) plus ``one``, ``encode`` and ``decode``.
    """

    zero = 0

    def __init__(self, order: int, spec=None, table_threshold: int = TABLE_THRESHOLD):
        self.order = int(order)
        self.spec = spec
        self.table_threshold = table_threshold
        self.flags: list[str] = []
        # per-ring memo for derived lattices; fills are idempotent
        self._memo: dict = {}

    def __repr__(self):
        label = spec_label(self.spec) if self.spec is not None else type(self).__name__
        return f"<Ring {label} order={self.order}>"

    @property
    def label(self) -> str:
        return spec_label(self.spec) if self.spec is not None else f"table ring of order {self.order}"

    @cached_property
    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    @cached_property
    def add_table(self):
        if self.order > self.table_threshold:
            return None
        e = self.elements
        return np.asarray(self._add(e[:, None], e[None, :]), dtype=np.int64)

    @cached_property
    def mul_table(self):
        if self.order > self.table_threshold:
            return None
        e = self.elements
        return np.asarray(self._mul(e[:, None], e[None, :]), dtype=np.int64)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.asarray(self._neg(self.elements), dtype=np.int64)

    def add(self, x, y):
        table = self.add_table
        if table is not None:
            return table[x, y]
        return self._add(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))

    def mul(self, x, y):
        table = self.mul_table
        if table is not None:
            return table[x, y]
        return self._mul(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))

    def neg(self, x):
        return self.neg_table[x]

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    @cached_property
    def is_commutative(self) -> bool:
        e = self.elements
        for start in range(0, self.order, 256):
            rows = e[start:start + 256, None]
            if not np.array_equal(self.mul(rows, e[None, :]), self.mul(e[None, :], rows)):
                return False
        return True

    @cached_property
    def is_field(self) -> bool:
        if not self.is_commutative:
            return False
        e = self.elements
        for x in range(self.order):
            if x == self.zero:
                continue
            if not np.any(self.mul(x, e) == self.one):
                return False
        return True

    # subclasses
    one: int

    def _add(self, x, y):
        raise NotImplementedError

    def _mul(self, x, y):
        raise NotImplementedError

    def _neg(self, x):
        raise NotImplementedError

    def encode(self, form) -> int:
        raise NotImplementedError

    def decode(self, index: int):
        raise NotImplementedError


class _Residues(Ring):
    def __init__(self, n, spec, table_threshold):
        super().__init__(n, spec, table_threshold)
        self.n = n
        self.one = 1

    def _add(self, x, y):
        return (x + y) % self.n

    def _mul(self, x, y):
        return (x * y) % self.n

    def _neg(self, x):
        return (-x) % self.n

    def encode(self, form):
        return int(form) % self.n

    def decode(self, index):
        return int(index)


class _Products(Ring):
    def __init__(self, factors, spec, table_threshold):
        order = math.prod(f.order for f in factors)
        super().__init__(order, spec, table_threshold)
        self.factors = list(factors)
        self.radix = [math.prod(f.order for f in factors[:i]) for i in range(len(factors))]
        self.one = self.encode(tuple(f.one for f in factors))

    def _digits(self, x):
        return [(x // r) % f.order for r, f in zip(self.radix, self.factors)]

    def _join(self, digits):
        return sum(d * r for d, r in zip(digits, self.radix))

    def _add(self, x, y):
        return self._join([f.add(a, b) for f, a, b in zip(self.factors, self._digits(x), self._digits(y))])

    def _mul(self, x, y):
        return self._join([f.mul(a, b) for f, a, b in zip(self.factors, self._digits(x), self._digits(y))])

    def _neg(self, x):
        return self._join([f.neg(a) for f, a in zip(self.factors, self._digits(x))])

    def encode(self, form):
        if len(form) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} components, got {len(form)}")
        return int(sum(int(d) * r for d, r in zip(form, self.radix)))

    def decode(self, index):
        return tuple(int(d) for d in self._digits(int(index)))


class _Matrices(Ring):
    """Square matrices over ``base`` restricted to a set of stored positions."""

    def __init__(self, base, size, positions, spec, table_threshold):
        order = base.order ** len(positions)
        super().__init__(order, spec, table_threshold)
        self.base = base
        self.size = size
        self.positions = list(positions)
        self.stored = set(self.positions)
        self.place = [base.order ** p for p in range(len(self.positions))]
        self.one = self.encode(
            tuple(tuple(base.one if i == j else base.zero for j in range(size)) for i in range(size))
        )

    def _entries(self, x):
        x = np.asarray(x, dtype=np.int64)
        b = self.base.order
        out = {}
        for (i, j), place in zip(self.positions, self.place):
            out[i, j] = (x // place) % b
        return out

    def _join(self, entries):
        return sum(entries[pos] * place for pos, place in zip(self.positions, self.place))

    def _add(self, x, y):
        ex, ey = self._entries(x), self._entries(y)
        return self._join({pos: self.base.add(ex[pos], ey[pos]) for pos in self.positions})

    def _neg(self, x):
        ex = self._entries(x)
        return self._join({pos: self.base.neg(ex[pos]) for pos in self.positions})

    def _mul(self, x, y):
        ex, ey = self._entries(x), self._entries(y)
        base = self.base
        out = {}
        for i, j in self.positions:
            acc = None
            for k in range(self.size):
                if (i, k) not in self.stored or (k, j) not in self.stored:
                    continue
                term = base.mul(ex[i, k], ey[k, j])
                acc = term if acc is None else base.add(acc, term)
            out[i, j] = acc if acc is not None else base.zero
        return self._join(out)

    def encode(self, form):
        rows = [list(r) for r in form]
        if len(rows) != self.size or any(len(r) != self.size for r in rows):
            raise ValueError(f"expected a {self.size}x{self.size} matrix")
        index = 0
        for i in range(self.size):
            for j in range(self.size):
                entry = int(rows[i][j])
                if (i, j) in self.stored:
                    index += entry * self.place[self.positions.index((i, j))]
                elif entry != self.base.zero:
                    raise ValueError(f"entry ({i},{j}) must be zero")
        return int(index)

    def decode(self, index):
        e = self._entries(int(index))
        return tuple(
            tuple(int(e[i, j]) if (i, j) in self.stored else self.base.zero for j in range(self.size))
            for i in range(self.size)
        )

    def unit_matrix(self, i: int, j: int) -> int:
        """Index of the matrix unit e_ij (0-based position)."""
        form = [[self.base.zero] * self.size for _ in range(self.size)]
        form[i][j] = self.base.one
        return self.encode(form)


class _Quotient(Ring):
    def __init__(self, base, ideal_indices, spec, table_threshold):
        ideal_indices = np.asarray(ideal_indices, dtype=np.int64)
        reps = np.full(base.order, -1, dtype=np.int64)
        for x in range(base.order):
            if reps[x] < 0:
                reps[base.add(x, ideal_indices)] = x
        self.representatives = np.unique(reps)
        label = np.empty(base.order, dtype=np.int64)
        label[self.representatives] = np.arange(len(self.representatives))
        self.labels = label[reps]
        super().__init__(len(self.representatives), spec, table_threshold)
        self.base = base
        self.ideal = ideal_indices
        self.one = int(self.labels[base.one])

    def _add(self, x, y):
        r = self.representatives
        return self.labels[self.base.add(r[x], r[y])]

    def _mul(self, x, y):
        r = self.representatives
        return self.labels[self.base.mul(r[x], r[y])]

    def _neg(self, x):
        return self.labels[self.base.neg(self.representatives[x])]

    def encode(self, form):
        """Map a base-ring element index to its coset."""
        return int(self.labels[int(form)])

    def decode(self, index):
        """Minimal base-ring representative of the coset."""
        return int(self.representatives[int(index)])


class TableRing(Ring):
    """A ring given by explicit add/mul tables (test fixtures, corrupted rings)."""

    def __init__(self, add_table, mul_table, zero=0, one=1, table_threshold=TABLE_THRESHOLD):
        add_table = np.asarray(add_table, dtype=np.int64)
        mul_table = np.asarray(mul_table, dtype=np.int64)
        super().__init__(len(add_table), None, max(table_threshold, len(add_table)))
        self.zero = zero
        self.one = one
        self.__dict__["add_table"] = add_table
        self.__dict__["mul_table"] = mul_table

    def _add(self, x, y):
        return self.add_table[x, y]

    def _mul(self, x, y):
        return self.mul_table[x, y]

    def _neg(self, x):
        inverse = np.argmax(self.add_table == self.zero, axis=1)
        return inverse[x]

    def encode(self, form):
        return int(form)

    def decode(self, index):
        return int(index)


# ---------------------------------------------------------------------------
# construction


def spec_order(spec: RingSpec) -> int:
    """Carrier size implied by a spec (quotients report their base size)."""
    if isinstance(spec, ZMod):
        return spec.n
    if isinstance(spec, MatrixRing):
        return spec_order(spec.base) ** (spec.size * spec.size)
    if isinstance(spec, UpperTriangular):
        return spec_order(spec.base) ** (spec.size * (spec.size + 1) // 2)
    if isinstance(spec, Product):
        return math.prod(spec_order(f) for f in spec.factors)
    if isinstance(spec, Quotient):
        return spec_order(spec.base)
    raise MalformedSpec(f"not a ring spec: {spec!r}")


def _check_spec(spec):
    if isinstance(spec, ZMod):
        if not isinstance(spec.n, int) or spec.n < 2:
            raise MalformedSpec(f"ZMod needs an integer n >= 2, got {spec.n!r}")
    elif isinstance(spec, (MatrixRing, UpperTriangular)):
        if not isinstance(spec.size, int) or spec.size < 1:
            raise MalformedSpec(f"matrix size must be an integer >= 1, got {spec.size!r}")
        _check_spec(spec.base)
    elif isinstance(spec, Product):
        if not spec.factors:
            raise MalformedSpec("Product needs at least one factor")
        for f in spec.factors:
            _check_spec(f)
    elif isinstance(spec, Quotient):
        _check_spec(spec.base)
    else:
        raise MalformedSpec(f"not a ring spec: {spec!r}")


def build_ring(spec: RingSpec, cap: int = DEFAULT_CAP, table_threshold: int = TABLE_THRESHOLD) -> Ring:
    """Build the ring described by ``spec``.

    Raises CapExceeded when the carrier (or a quotient's base) is larger than
    ``cap``, MalformedSpec for ill-formed trees and
    QuotientGeneratorsNotTwoSided when quotient generators fail to generate a
    two-sided ideal.
    """
    _check_spec(spec)
    order = spec_order(spec)
    if order > cap:
        raise CapExceeded(f"{spec_label(spec)} has {order} elements, cap is {cap}")
    return _build(spec, cap, table_threshold)


def _build(spec, cap, threshold):
    if isinstance(spec, ZMod):
        return _Residues(spec.n, spec, threshold)
    if isinstance(spec, Product):
        return _Products([_build(f, cap, threshold) for f in spec.factors], spec, threshold)
    if isinstance(spec, MatrixRing):
        base = _build(spec.base, cap, threshold)
        k = spec.size
        return _Matrices(base, k, [(i, j) for i in range(k) for j in range(k)], spec, threshold)
    if isinstance(spec, UpperTriangular):
        base = _build(spec.base, cap, threshold)
        k = spec.size
        ring = _Matrices(base, k, [(i, j) for i in range(k) for j in range(i, k)], spec, threshold)
        if not base.is_field:
            ring.flags.append("triangular-over-non-field")
        return ring
    if isinstance(spec, Quotient):
        base = _build(spec.base, cap, threshold)
        for g in spec.ideal_generators:
            if not 0 <= g < base.order:
                raise MalformedSpec(f"quotient generator {g} outside 0..{base.order - 1}")
        ideal = right_closure(base, spec.ideal_generators)
        return _make_quotient(base, ideal, spec, threshold)
    raise MalformedSpec(f"not a ring spec: {spec!r}")


def _make_quotient(base, ideal_flags, spec, threshold):
    members = np.flatnonzero(ideal_flags)
    if len(members) == base.order:
        raise MalformedSpec("quotient by the whole ring would have 1 = 0")
    products = base.mul(base.elements[:, None], members[None, :])
    if not ideal_flags[products].all():
        r, a = np.argwhere(~ideal_flags[products])[0]
        raise QuotientGeneratorsNotTwoSided(
            f"left multiple {int(r)}*{int(members[a])} leaves the generated right ideal"
        )
    return _Quotient(base, members, spec, threshold)


def quotient_ring(ring: Ring, ideal_mask: int) -> Ring:
    """R/I for a two-sided ideal given as an element bitmask of ``ring``."""
    flags = mask_to_bools(ideal_mask, ring.order)
    return _make_quotient(ring, flags, None, ring.table_threshold)


# ---------------------------------------------------------------------------
# low-level closures shared with the ideal calculus


def additive_span(ring: Ring, seeds) -> np.ndarray:
    """Boolean membership vector of the additive subgroup generated by seeds."""
    inside = np.zeros(ring.order, dtype=bool)
    inside[ring.zero] = True
    members = np.array([ring.zero], dtype=np.int64)
    seeds = np.unique(np.asarray(seeds, dtype=np.int64).ravel())
    while True:
        outside = seeds[~inside[seeds]]
        if len(outside) == 0:
            return inside
        s = int(outside[0])
        multiples = []
        x = s
        while not inside[x]:
            multiples.append(x)
            x = int(ring.add(x, s))
        # H + <s> is the union of the cosets H + ks for k below the order of s mod H
        inside[ring.add(members[:, None], np.array(multiples)[None, :]).ravel()] = True
        members = np.flatnonzero(inside)
        seeds = outside


def right_closure(ring: Ring, gens) -> np.ndarray:
    """Membership vector of the right ideal generated by ``gens``."""
    gens = np.asarray(list(gens), dtype=np.int64)
    if len(gens) == 0:
        return additive_span(ring, [])
    return additive_span(ring, ring.mul(gens[:, None], ring.elements[None, :]))


# ---------------------------------------------------------------------------
# axioms and central idempotents


@dataclass
class AxiomReport:
    ok: bool
    checks: dict
    witnesses: dict = field(default_factory=dict)
    first_violation: tuple | None = None
    flags: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": dict(self.checks),
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
            "first_violation": None if self.first_violation is None
            else [self.first_violation[0], list(self.first_violation[1])],
            "flags": list(self.flags),
        }


def ring_axioms_report(ring: Ring) -> AxiomReport:
    """Exhaustively check the ring axioms; failures carry witness tuples."""
    n = ring.order
    e = ring.elements
    A = ring.add_table if ring.add_table is not None else np.asarray(ring.add(e[:, None], e[None, :]))
    M = ring.mul_table if ring.mul_table is not None else np.asarray(ring.mul(e[:, None], e[None, :]))
    witnesses: dict[str, tuple] = {}
    checks: dict[str, bool] = {}

    def record(name, bad, coords):
        checks[name] = not bad
        if bad:
            witnesses[name] = tuple(int(c) for c in coords)

    def first(mask):
        hits = np.argwhere(mask)
        return hits[0] if len(hits) else None

    closed = ((A >= 0) & (A < n)).all() and ((M >= 0) & (M < n)).all()
    checks["closure"] = bool(closed)
    if not closed:
        return AxiomReport(False, checks, {}, ("closure", ()), list(ring.flags))

    hit = first(A != A.T)
    record("additive_commutativity", hit is not None, () if hit is None else hit)
    hit = first(A[ring.zero] != e)
    record("additive_identity", hit is not None, () if hit is None else hit)
    hit = first(~(A == ring.zero).any(axis=1))
    record("additive_inverse", hit is not None, () if hit is None else hit)

    def triple_scan(name, lhs, rhs):
        for x in range(n):
            hit = first(lhs(x) != rhs(x))
            if hit is not None:
                record(name, True, (x, *hit))
                return
        record(name, False, ())

    triple_scan("additive_associativity", lambda x: A[A[x]], lambda x: A[x, A])
    triple_scan("multiplicative_associativity", lambda x: M[M[x]], lambda x: M[x, M])
    # x(y+z) = xy + xz  and  (y+z)x = yx + zx
    triple_scan("left_distributivity", lambda x: M[x, A], lambda x: A[M[x][:, None], M[x][None, :]])
    triple_scan("right_distributivity", lambda x: M[A, x], lambda x: A[M[:, x][:, None], M[:, x][None, :]])

    bad = first((M[ring.one] != e) | (M[:, ring.one] != e))
    record("multiplicative_identity", bad is not None, () if bad is None else bad)
    checks["one_ne_zero"] = ring.one != ring.zero
    if ring.one == ring.zero:
        witnesses["one_ne_zero"] = (ring.one,)

    first_violation = None
    for name, passed in checks.items():
        if not passed:
            first_violation = (name, witnesses.get(name, ()))
            break
    return AxiomReport(first_violation is None, checks, witnesses, first_violation, list(ring.flags))


@dataclass(frozen=True)
class CentralIdempotentSet:
    all_central_idempotents: tuple
    primitive: tuple


def central_idempotents(ring: Ring, cap: int = DEFAULT_CAP) -> CentralIdempotentSet:
    """All central idempotents and the complete set of centrally primitive ones.

    The primitive ones are the atoms of the Boolean algebra of central
    idempotents under ``f <= e  iff  fe = f``.
    """
    if ring.order > cap:
        raise CapExceeded(f"{ring!r} exceeds cap {cap}")
    e = ring.elements
    idempotents = np.flatnonzero(ring.mul(e, e) == e)
    central = [
        int(x) for x in idempotents
        if np.array_equal(ring.mul(int(x), e), ring.mul(e, int(x)))
    ]
    atoms = []
    for x in central:
        if x == ring.zero:
            continue
        below = [f for f in central if f not in (ring.zero, x) and int(ring.mul(f, x)) == f]
        if not below:
            atoms.append(x)
    return CentralIdempotentSet(tuple(sorted(central)), tuple(sorted(atoms)))
