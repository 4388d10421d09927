"""Serial factorizations of right ideals in finite rings.

A serial factorization of A is A = A1 ... An with proper, pairwise commuting,
coindependent factors whose quotients R/Ai are uniserial.  When n >= 2 all
factors are two-sided and R/A splits as a ring into the chain rings R/Ai, so
the factors are forced by the centrally primitive idempotents of R/A; this
turns existence into a decision procedure (``find_serial_factorization``).
``all_serial_factorizations`` is the independent brute-force search.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BudgetExceeded,
    ImproperIdeal,
    NoInjectionFound,
    NotAnOverideal,
    NotFactorizable,
    ProfileViolation,
)
from .ideals import (
    RightIdeal,
    _require_cap,
    _same_ring,
    all_right_ideals,
    ideal_product,
    ideal_sum,
    is_coindependent,
    is_right_chain,
    is_right_duo,
    is_two_sided,
    iterated_product,
    join_masks,
    maximal_right_ideals,
    right_ideal,
    sums_to_whole,
    two_sided_witness,
)
from .lattice import incomparable_pair, is_uniserial_quotient
from .rings import Ring, central_idempotents, quotient_ring

NOT_PROPER = "NotProper"
NOT_TWO_SIDED_TARGET = "NotTwoSidedTarget"
NO_CENTRAL_SPLIT = "NoCentralSplit"
FACTORS_DONT_COMMUTE = "FactorsDontCommute"
NOT_COINDEPENDENT = "NotCoindependent"
PRODUCT_MISMATCH = "ProductMismatch"
QUOTIENT_NOT_UNISERIAL = "QuotientNotUniserial"
CANONICAL_MAP_NOT_BIJECTIVE = "CanonicalMapNotBijective"

DEFAULT_MAX_FACTORS = 4
DEFAULT_SEARCH_BUDGET = 10**6


@dataclass
class SerialFactorization:
    target: RightIdeal
    factors: tuple
    certificate: dict = field(default_factory=dict)

    ok = True

    def __len__(self):
        return len(self.factors)

    def factor_set(self) -> frozenset:
        return frozenset(f.mask for f in self.factors)

    def to_dict(self) -> dict:
        return {
            "target": list(self.target.elements),
            "factors": [list(f.elements) for f in self.factors],
            "certificate": dict(self.certificate),
        }


@dataclass
class FactorizationFailure:
    """Negative certificate: the first failed check and a finite witness."""

    reason: str
    witness: dict
    index: int | None = None
    certificate: dict = field(default_factory=dict)

    ok = False

    def to_dict(self) -> dict:
        out = {"reason": self.reason, "witness": self.witness, "certificate": dict(self.certificate)}
        if self.index is not None:
            out["index"] = self.index
        return out


# ---------------------------------------------------------------------------
# verification


def _coset_labels(I: RightIdeal) -> np.ndarray:
    """label[x] = minimal element of x + I."""
    ring = I.ring
    labels = np.full(ring.order, -1, dtype=np.int64)
    for x in range(ring.order):
        if labels[x] < 0:
            labels[ring.add(x, I.indices)] = x
    return labels


def canonical_map_is_bijective(A: RightIdeal, factors) -> bool:
    """r + A -> (r + A1, ..., r + An) is a well-defined bijection."""
    ring = A.ring
    target = np.stack([_coset_labels(f) for f in factors])
    source = _coset_labels(A)
    n_source = len(np.unique(source))
    n_image = np.unique(target, axis=1).shape[1]
    n_pairs = np.unique(np.vstack([source[None, :], target]), axis=1).shape[1]
    codomain = math.prod(ring.order // f.size for f in factors)
    return n_source == n_image == n_pairs == codomain


def _first_element(mask: int):
    return (mask & -mask).bit_length() - 1


def verify_serial_factorization(A: RightIdeal, factors, cap: int | None = None):
    """Check every defining condition in a fixed order.

    Returns a SerialFactorization carrying a pass certificate, or the first
    FactorizationFailure with its witness.
    """
    factors = tuple(factors)
    if not factors:
        raise ValueError("a serial factorization needs at least one factor")
    ring = _same_ring(A, *factors)
    _require_cap(ring, cap)
    cert: dict[str, str] = {}

    for i, f in enumerate(factors):
        if not f.is_proper:
            return FactorizationFailure(NOT_PROPER, {"index": i}, i, cert)
    cert["proper"] = "pass"

    for i, j in itertools.combinations(range(len(factors)), 2):
        left = ideal_product(factors[i], factors[j])
        right = ideal_product(factors[j], factors[i])
        if left.mask != right.mask:
            x = _first_element(left.mask ^ right.mask)
            return FactorizationFailure(
                FACTORS_DONT_COMMUTE, {"pair": [i, j], "element": x}, None, cert
            )
    cert["commuting"] = "pass"

    if not is_coindependent(factors):
        full = (1 << ring.order) - 1
        for i, f in enumerate(factors):
            others = full
            for j, g in enumerate(factors):
                if j != i:
                    others &= g.mask
            covered = join_masks(ring, f.mask, others)
            if covered != full:
                missing = _first_element(full & ~covered)
                return FactorizationFailure(
                    NOT_COINDEPENDENT, {"index": i, "element": missing}, i, cert
                )
    cert["coindependent"] = "pass"

    product = iterated_product(factors)
    if product.mask != A.mask:
        x = _first_element(product.mask ^ A.mask)
        return FactorizationFailure(PRODUCT_MISMATCH, {"element": x}, None, cert)
    cert["product"] = "pass"

    for i, f in enumerate(factors):
        if not is_uniserial_quotient(f, cap):
            a, b = incomparable_pair(f, cap)
            return FactorizationFailure(
                QUOTIENT_NOT_UNISERIAL,
                {"index": i, "incomparable": [list(a.elements), list(b.elements)]},
                i,
                cert,
            )
    cert["uniserial"] = "pass"

    if len(factors) >= 2:
        for ideal in (A, *factors):
            witness = two_sided_witness(ideal)
            if witness is not None:
                return FactorizationFailure(
                    NOT_TWO_SIDED_TARGET,
                    {"left": witness[0], "element": witness[1], "ideal": list(ideal.elements)},
                    None,
                    cert,
                )
        cert["two_sided"] = "pass"

    if not canonical_map_is_bijective(A, factors):
        return FactorizationFailure(CANONICAL_MAP_NOT_BIJECTIVE, {}, None, cert)
    cert["canonical_map_bijective"] = "pass"
    return SerialFactorization(A, factors, cert)


# ---------------------------------------------------------------------------
# construction


def find_serial_factorization(A: RightIdeal, cap: int | None = None):
    """The serial factorization of A built from central idempotents of R/A.

    The complete set of indecomposable central idempotents is unique, so if
    the forced candidate fails verification, A has no serial factorization
    and the failure is returned as the certificate.
    """
    ring = A.ring
    if not A.is_proper:
        raise ImproperIdeal("the whole ring has no serial factorization")
    _require_cap(ring, cap)
    key = ("find", A.mask)
    if key in ring._memo:
        return ring._memo[key]

    if is_uniserial_quotient(A, cap):
        result = verify_serial_factorization(A, [A], cap)
    elif (witness := two_sided_witness(A)) is not None:
        result = FactorizationFailure(
            NOT_TWO_SIDED_TARGET, {"left": witness[0], "element": witness[1]}
        )
    else:
        quotient = ring if A.is_zero else quotient_ring(ring, A.mask)
        lift = (lambda e: int(e)) if quotient is ring else quotient.decode
        idempotents = central_idempotents(quotient)
        if len(idempotents.primitive) == 1:
            central = [lift(e) for e in idempotents.all_central_idempotents]
            result = FactorizationFailure(NO_CENTRAL_SPLIT, {"central_idempotents": central})
        else:
            factors = []
            for e in idempotents.primitive:
                complement = int(ring.sub(ring.one, lift(e)))
                factors.append(ideal_sum(A, right_ideal(ring, [complement])))
            result = verify_serial_factorization(A, factors, cap)
    ring._memo[key] = result
    return result


def _comaximal_cliques(pool, max_size, budget):
    """Sets of pool indices of size 2..max_size that are pairwise comaximal.

    Pairwise comaximality is necessary for coindependence because
    A_i + (intersection of the others) is contained in A_i + A_j.
    """
    n = len(pool)
    adjacent = [[j > i and sums_to_whole(pool[i], pool[j]) for j in range(n)] for i in range(n)]
    examined = 0
    cliques = []
    oversized = False

    def extend(clique, start):
        nonlocal examined, oversized
        for j in range(start, n):
            if all(adjacent[i][j] for i in clique):
                grown = clique + [j]
                examined += 1
                if examined > budget:
                    raise BudgetExceeded(f"more than {budget} candidate factor sets")
                if len(grown) > max_size:
                    oversized = True
                    continue
                cliques.append(grown)
                extend(grown, j + 1)

    for i in range(n):
        extend([i], i + 1)
    return cliques, oversized


def all_serial_factorizations(
    A: RightIdeal,
    max_n: int = DEFAULT_MAX_FACTORS,
    budget: int = DEFAULT_SEARCH_BUDGET,
    cap: int | None = None,
) -> list:
    """Every ordered factor tuple of length <= max_n passing verification.

    Candidate factors are the proper overideals of A with uniserial quotient
    (every factor contains the product A).  Raises BudgetExceeded when a
    larger pairwise-comaximal candidate set exists, since the bound might
    then hide factorizations.
    """
    from .lattice import overideals

    ring = A.ring
    _require_cap(ring, cap)
    if not A.is_proper:
        return []
    pool = [B for B in overideals(A, cap).members if B.is_proper and is_uniserial_quotient(B, cap)]
    found = []
    if A in pool:
        result = verify_serial_factorization(A, [A], cap)
        if result.ok:
            found.append(result)
    cliques, oversized = _comaximal_cliques(pool, max_n, budget)
    if oversized:
        raise BudgetExceeded(f"pairwise comaximal candidate sets exceed max_n={max_n}")
    for clique in cliques:
        members = [pool[i] for i in clique]
        first = verify_serial_factorization(A, members, cap)
        if not first.ok:
            continue
        for order in itertools.permutations(members):
            result = verify_serial_factorization(A, order, cap)
            if not result.ok:
                raise AssertionError("verification depends on factor order")
            found.append(result)
    return found


# ---------------------------------------------------------------------------
# overideals and divisors


def _check_overideal(fact: SerialFactorization, B: RightIdeal):
    _same_ring(fact.target, B)
    if not B.is_proper:
        raise ImproperIdeal("B must be a proper right ideal")
    if not fact.target <= B:
        raise NotAnOverideal("B does not contain the factored ideal")


def overideal_has_factorization(fact: SerialFactorization, B: RightIdeal) -> bool:
    """B ⊇ A factors iff it contains some factor or is two-sided."""
    _check_overideal(fact, B)
    return any(f <= B for f in fact.factors) or is_two_sided(B)


def overideal_factorization(fact: SerialFactorization, B: RightIdeal, cap: int | None = None):
    """The factorization (B + A1) ... (B + An) with whole-ring factors omitted."""
    if not overideal_has_factorization(fact, B):
        raise NotFactorizable("B neither contains a factor nor is two-sided")
    factors = [s for s in (ideal_sum(B, f) for f in fact.factors) if s.is_proper]
    result = verify_serial_factorization(B, factors, cap)
    if not result.ok:
        raise NotFactorizable(f"constructed factors fail verification: {result.reason}")
    return result


def divisor_injection(fact_a: SerialFactorization, fact_b: SerialFactorization) -> tuple:
    """Lexicographically first injective sigma with A_sigma(j) ⊆ B_j (0-based)."""
    _same_ring(fact_a.target, fact_b.target)
    if not fact_a.target <= fact_b.target:
        raise NotAnOverideal("A must be contained in B")
    a, b = fact_a.factors, fact_b.factors
    options = [[i for i in range(len(a)) if a[i] <= bj] for bj in b]

    def search(j, used):
        if j == len(b):
            return []
        for i in options[j]:
            if i not in used:
                rest = search(j + 1, used | {i})
                if rest is not None:
                    return [i] + rest
        return None

    sigma = search(0, frozenset())
    if sigma is None:
        raise NoInjectionFound("no injective containment map between the factor lists")
    return tuple(sigma)


# ---------------------------------------------------------------------------
# ring-level structure


CHAIN_RING = "ChainRing"
DUO_CHAIN_PRODUCT = "DuoChainProduct"
NEITHER = "Neither"


@dataclass
class Classification:
    all_factor: bool
    classification: str
    blocks: int
    failing_ideal: RightIdeal | None = None

    @property
    def consistent(self) -> bool:
        return self.all_factor == (self.classification != NEITHER)

    def to_dict(self) -> dict:
        return {
            "all_factor": self.all_factor,
            "classification": self.classification,
            "blocks": self.blocks,
            "consistent": self.consistent,
            "failing_ideal": None if self.failing_ideal is None else list(self.failing_ideal.elements),
        }


def block_rings(ring: Ring) -> list:
    """The indecomposable factor rings eR = R/(1-e)R, one per primitive central idempotent."""
    blocks = []
    for e in central_idempotents(ring).primitive:
        complement = right_ideal(ring, [int(ring.sub(ring.one, e))])
        blocks.append(quotient_ring(ring, complement.mask) if not complement.is_zero else ring)
    return blocks


def classify_all_factor(ring: Ring, cap: int | None = None) -> Classification:
    """Compare 'every proper right ideal factors' with the structural classification."""
    _require_cap(ring, cap)
    failing = None
    for I in all_right_ideals(ring, cap):
        if I.is_proper and not find_serial_factorization(I, cap).ok:
            failing = I
            break
    blocks = block_rings(ring)
    if is_right_chain(ring, cap):
        kind = CHAIN_RING
    elif len(blocks) >= 2 and all(is_right_chain(b, cap) and is_right_duo(b, cap) for b in blocks):
        kind = DUO_CHAIN_PRODUCT
    else:
        kind = NEITHER
    return Classification(failing is None, kind, len(blocks), failing)


def maximal_ideal_profile(fact: SerialFactorization, cap: int | None = None) -> list:
    """The unique maximal right ideal above each factor, with the profile checks."""
    ring = fact.target.ring
    maxes = maximal_right_ideals(ring, cap)
    profile = []
    for i, f in enumerate(fact.factors):
        above = [M for M in maxes if f <= M]
        if len(above) != 1:
            raise ProfileViolation(f"factor {i} lies in {len(above)} maximal right ideals")
        profile.append(above[0])
    if len({M.mask for M in profile}) != len(profile):
        raise ProfileViolation("maximal right ideals of distinct factors coincide")
    over_target = {M.mask for M in maxes if fact.target <= M}
    if over_target != {M.mask for M in profile}:
        raise ProfileViolation("profile differs from the maximal right ideals containing the target")
    if len(fact.factors) >= 2 and not all(is_two_sided(M) for M in profile):
        raise ProfileViolation("a profile ideal is not two-sided")
    return profile


def decomposition_check(fact: SerialFactorization, cap: int | None = None) -> dict:
    """For n >= 2: the canonical map is multiplicative and every R/Ai is a right chain ring."""
    ring = fact.target.ring
    if len(fact.factors) < 2:
        return {"multiplicative": True, "chain_factors": True}
    e = ring.elements
    products = ring.mul(e[:, None], e[None, :])
    multiplicative = True
    chains = True
    for f in fact.factors:
        q = quotient_ring(ring, f.mask)
        images = q.labels
        if not np.array_equal(images[products], q.mul(images[:, None], images[None, :])):
            multiplicative = False
        if not is_right_chain(q, cap):
            chains = False
    return {"multiplicative": multiplicative, "chain_factors": chains}

