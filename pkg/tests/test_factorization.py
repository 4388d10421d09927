import itertools
import math
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from serialfact import factorization as sf
from serialfact.errors import BudgetExceeded, ImproperIdeal, NotAnOverideal
from serialfact.ideals import (
    all_right_ideals,
    ideal_from_elements,
    ideal_intersection,
    ideal_product,
    ideal_sum,
    is_two_sided,
    iterated_product,
    right_ideal,
    whole_ring,
    zero_ideal,
)
from serialfact.lattice import exists_epi, exists_mono, is_uniserial_quotient, overideals
from serialfact.rings import MatrixRing, Product, Quotient, UpperTriangular, ZMod, build_ring
from serialfact.suites import triangular_maximals

F2, F3 = ZMod(2), ZMod(3)


@lru_cache(maxsize=None)
def ring(spec):
    return build_ring(spec)


def Z(n):
    return ring(ZMod(n))


def ideal(r, *gens):
    return right_ideal(r, gens)


@pytest.fixture(scope="module")
def t2():
    r = ring(UpperTriangular(2, F2))
    M1, M2 = triangular_maximals(r)
    J = ideal(r, r.unit_matrix(0, 1))
    return r, M1, M2, J


# ---------------------------------------------------------------------------
# verification


def test_verify_zmod12():
    z = Z(12)
    result = sf.verify_serial_factorization(zero_ideal(z), [ideal(z, 3), ideal(z, 4)])
    assert result.ok
    assert list(result.certificate) == [
        "proper", "commuting", "coindependent", "product", "uniserial", "two_sided", "canonical_map_bijective"
    ]
    assert sf.canonical_map_is_bijective(zero_ideal(z), [ideal(z, 3), ideal(z, 4)])


def test_verify_reports_first_failure(t2):
    r, M1, M2, J = t2
    assert ideal_product(M1, M2).is_zero and ideal_product(M2, M1) == J
    result = sf.verify_serial_factorization(J, [M1, M2])
    assert not result.ok and result.reason == sf.FACTORS_DONT_COMMUTE
    assert result.witness["pair"] == [0, 1]
    z = Z(12)
    assert sf.verify_serial_factorization(zero_ideal(z), [whole_ring(z)]).reason == sf.NOT_PROPER
    assert sf.verify_serial_factorization(zero_ideal(z), [ideal(z, 2), ideal(z, 6)]).reason == sf.NOT_COINDEPENDENT
    assert sf.verify_serial_factorization(ideal(z, 6), [ideal(z, 3), ideal(z, 4)]).reason == sf.PRODUCT_MISMATCH
    bad = sf.verify_serial_factorization(zero_ideal(z), [zero_ideal(z)])
    assert bad.reason == sf.QUOTIENT_NOT_UNISERIAL and bad.index == 0
    with pytest.raises(ValueError):
        sf.verify_serial_factorization(zero_ideal(z), [])


def test_verify_rejects_one_sided_target():
    r = ring(UpperTriangular(3, F2))
    ideals = [I for I in all_right_ideals(r) if I.is_proper]
    one_sided = [I for I in ideals if not is_two_sided(I)]
    assert one_sided
    # a single factor equal to a one-sided A with uniserial quotient is still fine
    for A in one_sided:
        res = sf.verify_serial_factorization(A, [A])
        assert res.ok == is_uniserial_quotient(A) or res.reason == sf.QUOTIENT_NOT_UNISERIAL


# ---------------------------------------------------------------------------
# construction


def test_find_examples(t2):
    z = Z(12)
    found = sf.find_serial_factorization(zero_ideal(z))
    assert found.ok and [f.elements for f in found.factors] == [(0, 3, 6, 9), (0, 4, 8)]
    r, _, _, J = t2
    assert sf.find_serial_factorization(J).reason == sf.FACTORS_DONT_COMMUTE
    m2 = ring(MatrixRing(2, F2))
    res = sf.find_serial_factorization(zero_ideal(m2))
    assert res.reason == sf.NO_CENTRAL_SPLIT
    assert res.witness["central_idempotents"] == [0, 9]
    with pytest.raises(ImproperIdeal):
        sf.find_serial_factorization(whole_ring(z))


def test_find_uniserial_and_one_sided():
    z = Z(12)
    res = sf.find_serial_factorization(ideal(z, 4))
    assert res.ok and res.factors == (ideal(z, 4),)
    # e22 R in T2(F2) is one-sided but R/e22R is uniserial: trivial factorization
    t2r = ring(UpperTriangular(2, F2))
    e22R = ideal(t2r, t2r.unit_matrix(1, 1))
    assert not is_two_sided(e22R)
    assert sf.find_serial_factorization(e22R).factors == (e22R,)
    # e23 R in T3(F2) is one-sided with a non-uniserial quotient
    r = ring(UpperTriangular(3, F2))
    e23R = ideal(r, r.unit_matrix(1, 2))
    assert e23R.elements == (0, 16)
    res = sf.find_serial_factorization(e23R)
    assert res.reason == sf.NOT_TWO_SIDED_TARGET
    x, a = res.witness["left"], res.witness["element"]
    assert int(r.mul(x, a)) not in e23R
    assert sf.all_serial_factorizations(e23R) == []


def test_all_serial_factorizations_examples(t2):
    z = Z(12)
    facts = sf.all_serial_factorizations(zero_ideal(z))
    assert sorted(tuple(f.elements for f in fact.factors) for fact in facts) == [
        ((0, 3, 6, 9), (0, 4, 8)),
        ((0, 4, 8), (0, 3, 6, 9)),
    ]
    assert [[f.elements for f in fact.factors] for fact in sf.all_serial_factorizations(ideal(z, 4))] == [[(0, 4, 8)]]
    _, _, _, J = t2
    assert sf.all_serial_factorizations(J) == []


def test_all_serial_factorizations_budget():
    # five pairwise comaximal uniserial overideals exceed max_n = 4
    r = ring(ZMod(2 * 3 * 5 * 7 * 11))
    with pytest.raises(BudgetExceeded):
        sf.all_serial_factorizations(zero_ideal(r))
    facts = sf.all_serial_factorizations(zero_ideal(r), max_n=5)
    assert len(facts) == math.factorial(5)


# ---------------------------------------------------------------------------
# overideals


def test_overideal_examples():
    z = Z(12)
    fact = sf.find_serial_factorization(zero_ideal(z))
    assert sf.overideal_has_factorization(fact, ideal(z, 6))
    assert sf.overideal_has_factorization(fact, ideal(z, 2))
    six = sf.overideal_factorization(fact, ideal(z, 6))
    assert [f.elements for f in six.factors] == [(0, 3, 6, 9), (0, 2, 4, 6, 8, 10)]
    two = sf.overideal_factorization(fact, ideal(z, 2))
    assert [f.elements for f in two.factors] == [(0, 2, 4, 6, 8, 10)]
    same = sf.overideal_factorization(fact, zero_ideal(z))
    assert same.factors == fact.factors
    assert sf.divisor_injection(fact, six) == (0, 1)
    assert sf.divisor_injection(fact, two) == (1,)
    assert sf.divisor_injection(fact, fact) == (0, 1)
    with pytest.raises(NotAnOverideal):
        sf.overideal_has_factorization(six, zero_ideal(z))
    with pytest.raises(ImproperIdeal):
        sf.overideal_has_factorization(fact, whole_ring(z))


def test_overideal_criterion_never_fails_in_finite_rings():
    # n >= 2 makes R/A a product of finite chain rings, which are duo, so every
    # overideal is two-sided; n = 1 means every overideal contains the factor
    r = ring(UpperTriangular(3, F2))
    M = triangular_maximals(r)
    A = ideal_product(M[0], M[2])
    fact = sf.find_serial_factorization(A)
    assert fact.ok and set(fact.factor_set()) == {M[0].mask, M[2].mask}
    members = [B for B in overideals(A).members if B.is_proper]
    assert set(members) == {A, M[0], M[2]}
    for B in members:
        assert sf.overideal_has_factorization(fact, B)
    # outside the overideal lattice the J of T3 has no factorization at all
    J = ideal(r, r.unit_matrix(0, 1), r.unit_matrix(0, 2), r.unit_matrix(1, 2))
    assert not A <= J
    assert not sf.find_serial_factorization(J).ok
    assert sf.all_serial_factorizations(J) == []
    with pytest.raises(NotAnOverideal):
        sf.overideal_factorization(fact, J)


# ---------------------------------------------------------------------------
# ring-level structure


@pytest.mark.parametrize(
    "spec,kind,all_factor",
    [
        (ZMod(8), sf.CHAIN_RING, True),
        (Product([ZMod(2), ZMod(4)]), sf.DUO_CHAIN_PRODUCT, True),
        (ZMod(12), sf.DUO_CHAIN_PRODUCT, True),
        (UpperTriangular(2, F2), sf.NEITHER, False),
        (UpperTriangular(3, F2), sf.NEITHER, False),
        (MatrixRing(2, F3), sf.NEITHER, False),
        (ZMod(7), sf.CHAIN_RING, True),
    ],
)
def test_classification(spec, kind, all_factor):
    result = sf.classify_all_factor(ring(spec))
    assert (result.classification, result.all_factor, result.consistent) == (kind, all_factor, True)


def test_classification_names_the_failing_ideal():
    r = ring(UpperTriangular(2, F2))
    result = sf.classify_all_factor(r)
    assert result.failing_ideal is not None
    assert not sf.find_serial_factorization(result.failing_ideal).ok


def test_block_rings_of_products():
    blocks = sf.block_rings(ring(Product([ZMod(4), ZMod(9)])))
    assert sorted(b.order for b in blocks) == [4, 9]


def test_maximal_ideal_profile_examples():
    z = Z(12)
    fact = sf.find_serial_factorization(zero_ideal(z))
    assert [M.elements for M in sf.maximal_ideal_profile(fact)] == [(0, 3, 6, 9), (0, 2, 4, 6, 8, 10)]
    trivial = sf.find_serial_factorization(ideal(z, 4))
    assert [M.elements for M in sf.maximal_ideal_profile(trivial)] == [(0, 2, 4, 6, 8, 10)]
    r = ring(UpperTriangular(3, F2))
    M = triangular_maximals(r)
    fact = sf.verify_serial_factorization(ideal_product(M[0], M[2]), [M[0], M[2]])
    assert fact.ok
    assert sf.maximal_ideal_profile(fact) == [M[0], M[2]]


def test_decomposition_check_for_products():
    r = ring(Product([ZMod(4), ZMod(9), ZMod(5)]))
    fact = sf.find_serial_factorization(zero_ideal(r))
    assert len(fact) == 3
    assert sf.decomposition_check(fact) == {"multiplicative": True, "chain_factors": True}


# ---------------------------------------------------------------------------
# properties over a small pool

POOL = [ZMod(12), ZMod(30), ZMod(72), Product([ZMod(4), ZMod(6)]), UpperTriangular(2, F3),
        UpperTriangular(3, F2), MatrixRing(2, F2), Quotient(UpperTriangular(3, F2), [4])]


@st.composite
def proper_ideal(draw):
    r = ring(draw(st.sampled_from(POOL)))
    proper = [I for I in all_right_ideals(r) if I.is_proper]
    return draw(st.sampled_from(proper))


@settings(max_examples=200, deadline=None)
@given(proper_ideal())
def test_find_agrees_with_exhaustive_search(A):
    found = sf.find_serial_factorization(A)
    facts = sf.all_serial_factorizations(A)
    assert found.ok == bool(facts)
    if facts:
        n = len(facts[0])
        assert len(facts) == math.factorial(n)
        assert {f.factor_set() for f in facts} == {found.factor_set()}
        assert iterated_product(found.factors) == A
        meet = found.factors[0]
        for f in found.factors[1:]:
            meet = ideal_intersection(meet, f)
        assert meet == A
        if n >= 2:
            assert is_two_sided(A)
            for i, j in itertools.permutations(range(n), 2):
                assert not exists_mono(found.factors[i], found.factors[j])
                assert not exists_epi(found.factors[j], found.factors[i])


@settings(max_examples=150, deadline=None)
@given(proper_ideal(), st.data())
def test_overideal_criterion_matches_direct_search(A, data):
    fact = sf.find_serial_factorization(A)
    if not fact.ok:
        return
    over = [B for B in overideals(A).members if B.is_proper]
    B = data.draw(st.sampled_from(over))
    assert sf.overideal_has_factorization(fact, B) == sf.find_serial_factorization(B).ok
    if sf.overideal_has_factorization(fact, B):
        built = sf.overideal_factorization(fact, B)
        assert built.factor_set() == sf.find_serial_factorization(B).factor_set()
        sigma = sf.divisor_injection(fact, built)
        assert len(set(sigma)) == len(sigma)
        for j, i in enumerate(sigma):
            assert fact.factors[i] <= built.factors[j]


def test_serialization():
    z = Z(12)
    fact = sf.find_serial_factorization(zero_ideal(z))
    assert fact.to_dict()["factors"] == [[0, 3, 6, 9], [0, 4, 8]]
    fail = sf.find_serial_factorization(zero_ideal(ring(MatrixRing(2, F2))))
    assert fail.to_dict()["reason"] == "NoCentralSplit"


def test_failure_reasons_are_finite_witnesses():
    for spec in (UpperTriangular(3, F2), MatrixRing(2, F3), UpperTriangular(2, F3)):
        for A in all_right_ideals(ring(spec)):
            if A.is_proper:
                res = sf.find_serial_factorization(A)
                if not res.ok:
                    assert res.reason in {
                        sf.NOT_TWO_SIDED_TARGET, sf.NO_CENTRAL_SPLIT, sf.FACTORS_DONT_COMMUTE,
                        sf.NOT_COINDEPENDENT, sf.PRODUCT_MISMATCH, sf.QUOTIENT_NOT_UNISERIAL,
                    }
                    assert isinstance(res.witness, dict)
