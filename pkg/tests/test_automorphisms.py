import numpy as np
import pytest

from class2groups.automorphisms import (
    Aut,
    EnumerationCapError,
    GenMap,
    apply,
    check,
    compose,
    aut_order,
    enumerate_brute,
    enumerate_phi_fixing,
    enumerate_phi_fixing_involutions,
    fixes_pointwise,
    identity_aut,
    inner_from,
    is_inner,
    is_inner_criterion,
    is_inner_direct,
    make_aut,
    star_condition,
    validate,
)
from class2groups.constructions import WitnessCase, case_witness
from class2groups.engine import Elem, make_group
from class2groups.structure import center, centralizer, closure, frattini, whole_group

from conftest import groups_up_to

SMALL = groups_up_to(2**10)


def E(i, j=0, k=0):
    return Elem(i, j, k)


@pytest.fixture(scope="module")
def alpha_1i(d8):
    return make_aut(d8, E(3), E(1, 1))


# -- validate -------------------------------------------------------------------


def test_validate_identity(d8):
    aut = validate(GenMap(d8, d8.a, d8.b))
    assert aut is not None
    assert np.array_equal(aut.table, np.arange(d8.order))
    assert aut == identity_aut(d8)


def test_validate_case_1i(d8):
    assert validate(GenMap(d8, E(3), E(1, 1))) is not None


def test_validate_not_surjective(d8):
    aut, reason = check(GenMap(d8, E(2), d8.b))
    assert aut is None and reason == "not-surjective"


def test_validate_relation_violated(d8):
    # b -> a has order 4, but b^2 = e in Q1(2,1)
    aut, reason = check(GenMap(d8, d8.a, d8.a))
    assert aut is None and reason.startswith("relation-violated")


def test_genmap_rejects_noncanonical(d8):
    with pytest.raises(ValueError):
        GenMap(d8, E(4), d8.b)


def test_make_aut_raises(d8):
    with pytest.raises(ValueError, match="not-surjective"):
        make_aut(d8, E(2), d8.b)


@pytest.mark.parametrize("G", groups_up_to(64), ids=lambda G: G.name)
def test_validate_agrees_with_brute_homomorphism_check(G):
    """For every generator-image pair, validate succeeds iff the induced word map
    is a bijective homomorphism checked on all |G|^2 products."""
    rng = np.random.default_rng(7)
    els = G.all_elements()
    pairs = [(els[x], els[y]) for x, y in rng.integers(0, G.order, size=(60, 2))]
    pairs.append((G.a, G.b))
    for X, Y in pairs:
        aut = validate(GenMap(G, X, Y))
        img = {g: G.product(G.pow(X, g.i), G.pow(Y, g.j), G.pow(G.commutator(X, Y), g.k)) for g in els}
        hom = all(img[G.mul(g, h)] == G.mul(img[g], img[h]) for g in els for h in els)
        bij = len(set(img.values())) == G.order
        assert (aut is not None) == (hom and bij)
        if aut is not None:
            assert all(aut(g) == img[g] for g in els)


# -- apply / compose / order --------------------------------------------------


def test_apply_examples(d8, alpha_1i):
    g = E(1, 1)
    assert apply(identity_aut(d8), g) == g
    assert apply(alpha_1i, E(2)) == E(2)
    assert apply(alpha_1i, E(1, 1)) == d8.b
    assert apply(alpha_1i, d8.a) == E(3)


def test_aut_order_examples(d8, alpha_1i):
    assert aut_order(identity_aut(d8)) == 1
    assert aut_order(alpha_1i) == 2
    G = make_group("Q1", 4, 2)
    alpha2 = validate(case_witness(WitnessCase("1iii-a2"), G))
    assert alpha2 is not None and aut_order(alpha2) != 2


def test_compose_applies_left_first(d8, alpha_1i):
    beta = inner_from(d8.a, d8)
    ab = compose(alpha_1i, beta)
    for g in d8:
        assert ab(g) == beta(alpha_1i(g))


@pytest.mark.parametrize("G", [make_group("Q1", 2, 1), make_group("Q2", 2, 2), make_group("R3", 2)],
                         ids=lambda G: G.name)
def test_compose_associative(G):
    auts = enumerate_phi_fixing(G, involutions=False)[:6]
    inn = [inner_from(x, G) for x in G.all_elements()[:: max(1, G.order // 6)]]
    pool = auts + inn
    for x in pool[:5]:
        for y in pool[:5]:
            for z in pool[:5]:
                assert compose(compose(x, y), z) == compose(x, compose(y, z))


def test_fixes_pointwise_examples(d8, alpha_1i):
    assert fixes_pointwise(identity_aut(d8), whole_group(d8))
    assert fixes_pointwise(alpha_1i, frattini(d8))
    assert not fixes_pointwise(alpha_1i, closure([d8.b], d8))


# -- inner automorphisms -------------------------------------------------------


def test_inner_from_examples(d8):
    assert inner_from(d8.identity, d8) == identity_aut(d8)
    theta = inner_from(d8.b, d8)
    assert theta.map == GenMap(d8, E(3), d8.b)
    # conjugation is g -> x^-1 g x
    for g in d8:
        assert theta(g) == d8.product(d8.inv(d8.b), g, d8.b)


def test_is_inner_direct_examples(d8, alpha_1i):
    assert is_inner_direct(identity_aut(d8)) == d8.identity
    assert is_inner_direct(make_aut(d8, E(3), d8.b)) == d8.b
    assert is_inner_direct(alpha_1i) is None


def test_is_inner_criterion_examples(d8, alpha_1i):
    assert is_inner_criterion(identity_aut(d8))
    assert not is_inner_criterion(alpha_1i)
    assert d8.mul(d8.inv(d8.b), E(1, 1)) not in closure([d8.c], d8)


@pytest.mark.parametrize("n", range(3, 7))
def test_is_inner_criterion_accepts_alpha1_analogue(n):
    """On Q1(n,1) the α1-shaped maps (a -> a^(1+2^(n-1)), b -> b) are inner."""
    G = make_group("Q1", n, 1)
    alpha = make_aut(G, E(1 + 2 ** (n - 1)), G.b)
    assert is_inner_criterion(alpha)
    assert is_inner_direct(alpha) is not None


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_inner_closure_count(G):
    maps = {inner_from(x, G).map for x in G}
    assert len(maps) == G.order // center(G).order


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_inner_phi_fixing_iff_centralizes_phi(G):
    phi = frattini(G)
    C = centralizer(phi)
    for x in G:
        assert fixes_pointwise(inner_from(x, G), phi) == (x in C)


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_direct_witness_is_least_and_correct(G):
    for x in G.all_elements()[:: max(1, G.order // 8)]:
        theta = inner_from(x, G)
        w = is_inner_direct(theta)
        assert w is not None and inner_from(w, G) == theta
        assert tuple(w) <= tuple(x)
        assert is_inner_criterion(theta)


# -- enumeration -------------------------------------------------------------------


def test_enumeration_q1_2_1(d8):
    maps = {aut.map for aut in enumerate_phi_fixing_involutions(d8)}
    assert GenMap(d8, E(3), E(1, 1)) in maps
    assert GenMap(d8, E(3), d8.b) in maps
    assert GenMap(d8, d8.a, E(2, 1)) in maps
    assert {aut.map for aut in enumerate_brute(d8)} == maps


def test_enumeration_q1_3_1():
    G = make_group("Q1", 3, 1)
    noninner = [a.map for a in enumerate_phi_fixing_involutions(G) if is_inner_direct(a) is None]
    assert noninner == [GenMap(G, E(3, 1), E(4, 1)), GenMap(G, E(7, 1), E(4, 1))]


def test_enumeration_q1_4_2_all_inner():
    G = make_group("Q1", 4, 2)
    auts = enumerate_phi_fixing_involutions(G)
    assert auts and all(is_inner(a) for a in auts)


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_pruned_equals_brute(G):
    pruned = enumerate_phi_fixing_involutions(G)
    brute = enumerate_phi_fixing_involutions(G, mode="brute")
    assert [a.map for a in pruned] == [a.map for a in brute]


@pytest.mark.parametrize("G", groups_up_to(2**12), ids=lambda G: G.name)
def test_enumerated_maps_are_phi_fixing_involutions(G):
    phi = frattini(G)
    auts = enumerate_phi_fixing_involutions(G)
    keys = [(G.index(a.map.image_a), G.index(a.map.image_b)) for a in auts]
    assert keys == sorted(keys)
    for a in auts:
        assert isinstance(a, Aut) and validate(a.map) is not None
        assert aut_order(a) == 2
        assert fixes_pointwise(a, phi)


def test_enumeration_caps():
    G = make_group("Q1", 8, 3)
    with pytest.raises(EnumerationCapError):
        enumerate_brute(G)
    with pytest.raises(EnumerationCapError):
        enumerate_phi_fixing(G, cap=2**10)
    with pytest.raises(ValueError):
        enumerate_phi_fixing_involutions(G, mode="other")


def test_enumeration_deterministic_across_workers():
    G = make_group("Q1", 6, 3)
    one = enumerate_phi_fixing(G, involutions=False)
    two = enumerate_phi_fixing(G, involutions=False, jobs=3)
    assert [a.map for a in one] == [a.map for a in two]
    assert star_condition(G) == star_condition(G, jobs=2)


# -- condition (⋆) --------------------------------------------------------------


def test_star_examples():
    rep = star_condition(make_group("Q1", 4, 2))
    assert rep.star_holds and rep.noninner_witnesses == ()
    rep = star_condition(make_group("Q1", 3, 1))
    assert not rep.star_holds and rep.noninner_count == 2
    G = make_group("R3", 1)
    rep = star_condition(G)
    assert not rep.star_holds
    assert GenMap(G, E(1, 1), G.pow(G.b, 3)) in rep.noninner_witnesses


@pytest.mark.parametrize("G", groups_up_to(2**12), ids=lambda G: G.name)
def test_star_report_counts(G):
    rep = star_condition(G)
    assert rep.total == rep.inner_count + rep.noninner_count
    assert rep.star_holds == (rep.noninner_count == 0)
    assert rep.total >= 1  # some inner involution always fixes Φ


def test_star_brute_mode_matches():
    for G in groups_up_to(256):
        assert star_condition(G) == star_condition(G, mode="brute")
