from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from corpus import DATA, corpus, monad, monoids, points, small_tests

from kleislilab.errors import MonadMismatch
from kleislilab.kleisli import (KleisliMonoid, box_product, check_monoid, discrete, enumerate_monoids,
                                final_structure, hom_set, indiscrete, initial_structure, is_hom,
                                is_monoid, unit_monoid)
from kleislilab.order import FinMap, FinSet, all_maps, constant, identity
from kleislilab.surface import load_instance

AB = FinSet(["a", "b"])
KEYS = ["P", "F", "U", "PV-bool2", "PV-luk5", "PV-min3-cart"]


@pytest.mark.parametrize("key", KEYS)
def test_discrete_and_indiscrete_are_monoids(key):
    m = monad(key)
    assert check_monoid(discrete(m, AB)).ok
    assert check_monoid(indiscrete(m, AB)).ok


def test_chain_preorder_is_a_monoid():
    P = monad("P")
    c = KleisliMonoid(P, AB, {"a": frozenset("a"), "b": frozenset("ab")})
    assert check_monoid(c).ok


def test_non_reflexive_and_non_transitive_fail():
    P = monad("P")
    c = KleisliMonoid(P, AB, {"a": frozenset(), "b": frozenset("b")})
    rep = check_monoid(c)
    assert not rep.ok and rep.find("reflexive").witness["x"] == "a"
    X = FinSet(["a", "b", "c"])
    c = KleisliMonoid(P, X, {"a": frozenset("a"), "b": frozenset("ab"), "c": frozenset("bc")})
    assert check_monoid(c).find("transitive").witness["x"] == "c"


def test_luk5_category_is_a_monoid():
    assert check_monoid(load_instance(DATA / "luk5_category.json")).ok


def test_homs_examples():
    chain = load_instance(DATA / "chain2.json")
    for x in corpus("P", 2):
        assert is_hom(identity(x.carrier), x, x)
        bottom = constant(x.carrier, chain.carrier, "0")
        assert is_hom(bottom, x, chain)
    # an F-hom into Sierpinski is the characteristic map of a closed set (0 -> open point)
    sier = load_instance(DATA / "sierpinski.json")
    alex = load_instance(DATA / "chain2.json")
    F = monad("F")
    space = KleisliMonoid(F, alex.carrier, {x: F.tau(alex.alpha[x]) for x in alex.carrier})
    up_closed = FinMap(space.carrier, sier.carrier, {"0": "0", "1": "1"})
    v = is_hom(up_closed, space, sier)
    not_closed = FinMap(space.carrier, sier.carrier, {"0": "1", "1": "0"})
    w = is_hom(not_closed, space, sier)
    assert v and not w and w.witness == {"x": "1"}


def test_mismatched_monads():
    with pytest.raises(MonadMismatch):
        hom_set(discrete(monad("P"), AB), discrete(monad("F"), AB))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_hom_search_matches_brute_force(data):
    for key in ("P", "F", "U", "PV-luk3"):
        src = data.draw(st.sampled_from(corpus(key, 2 if key != "P" else 3)))
        tgt = data.draw(st.sampled_from(corpus(key, 2)))
        brute = [f for f in all_maps(src.carrier, tgt.carrier) if is_hom(f, src, tgt)]
        assert hom_set(src, tgt).maps == brute


@pytest.mark.parametrize("key", ["P", "PV-bool2-cart"])
def test_box_product_of_preorders_is_the_product_order(key):
    for a, b in product(corpus(key, 2), repeat=2):
        c = box_product(a, b, check=True)
        for (x, y), (x2, y2) in product(c.carrier, repeat=2):
            prod = a.monad.leq(a.monad.unit(x2), a.alpha[x]) and b.monad.leq(b.monad.unit(y2), b.alpha[y])
            assert c.monad.leq(c.monad.unit((x2, y2)), c.alpha[(x, y)]) == prod


def test_initial_structure_two_chains():
    # intersection of the pullback preorders along two maps into the 2-chain
    P = monad("P")
    chain = load_instance(DATA / "chain2.json")
    f = FinMap(AB, chain.carrier, {"a": "0", "b": "1"})
    g = FinMap(AB, chain.carrier, {"a": "1", "b": "1"})
    omega = initial_structure(P, AB, [(f, chain), (g, chain)])
    rel = {(p, q) for p, q in product(AB, AB)
           if all(h(p) in chain.alpha[h(q)] for h in (f, g))}
    assert omega.alpha == {q: frozenset(p for p in AB if (p, q) in rel) for q in AB}
    same = initial_structure(P, chain.carrier, [(identity(chain.carrier), chain)])
    assert same.alpha == chain.alpha


@pytest.mark.parametrize("key", ["P", "F", "U", "PV-bool2"])
def test_empty_cone_gives_top(key):
    m = monad(key)
    top = initial_structure(m, AB, [])
    assert top.alpha == indiscrete(m, AB).alpha


@pytest.mark.parametrize("key", ["P", "F", "U"])
def test_final_structure_is_smallest(key):
    m = monad(key)
    for Z in small_tests(key):
        for f in all_maps(Z.carrier, AB):
            fin = final_structure(m, AB, [(f, Z)])
            assert is_monoid(fin) and is_hom(f, Z, fin)
            for beta in enumerate_monoids(m, AB):
                if is_hom(f, Z, beta):
                    assert all(m.leq(fin.alpha[x], beta.alpha[x]) for x in AB)


def test_enumeration_counts_against_oracles():
    for n in (1, 2, 3):
        assert len(monoids("P", n)) == oracles.count_preorders(n)
        assert len(monoids("F", n)) == oracles.count_topologies(n)
        assert len(monoids("U", n)) == oracles.count_interior_spaces(n)


def test_unit_monoid():
    for key in KEYS:
        E = unit_monoid(monad(key))
        assert len(E) == 1 and check_monoid(E).ok


def test_points_helper():
    assert list(points(2)) == ["0", "1"]
