from __future__ import annotations

from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kleislilab.errors import NoAdjoint, NotALattice
from kleislilab.instances import FilterMonad
from kleislilab.monad import sup_structure
from kleislilab.order import (ONE, FinMap, FinOrder, FinSet, SupStructure, all_maps, associator,
                              chain_order, identity, induced_order, is_distributive, left_unitor,
                              powerset, product_set, right_adjoint, right_unitor)

AB = FinSet(["a", "b"])


def _bool_or(S):
    return "1" if "1" in S else "0"


def test_induced_order_of_boolean_or():
    order = induced_order(SupStructure(FinSet(["0", "1"]), _bool_or))
    assert order.leq("0", "1") and not order.leq("1", "0")


def test_induced_order_of_union_is_inclusion():
    PX = powerset(AB)
    order = induced_order(SupStructure(PX, lambda S: frozenset().union(*S)))
    for A, B in product(PX, PX):
        assert order.leq(A, B) == (A <= B)


def test_filter_refinement_order_matches_generators():
    F = FilterMonad()
    s = sup_structure(F, AB)
    assert len(s.carrier) == 4
    order = induced_order(s)
    for f, g in product(s.carrier, s.carrier):
        assert order.leq(f, g) == (f.gen <= g.gen)


def test_induced_order_rejects_non_semilattice():
    # sup{x} = y cannot be the least upper bound of {x}
    X = FinSet(["x", "y"])
    with pytest.raises(NotALattice):
        induced_order(SupStructure(X, lambda S: "y" if S == frozenset({"x"}) else "x"))


def test_right_adjoint_of_identity():
    order = chain_order(FinSet(["0", "1", "2"]))
    f = identity(order.carrier)
    assert right_adjoint(f, order, order) == f


def test_right_adjoint_of_boolean_or_is_down_set():
    two = FinSet(["0", "1"])
    P2 = powerset(two)
    ordP = FinOrder(P2, lambda A, B: A <= B, join=lambda S: frozenset().union(*S))
    ord2 = chain_order(two)
    f = FinMap(P2, two, _bool_or)
    star = right_adjoint(f, ordP, ord2)
    assert star("0") == frozenset({"0"})
    assert star("1") == frozenset({"0", "1"})
    for x in two:
        assert star(x) == frozenset(y for y in two if ord2.leq(y, x))


def test_right_adjoint_of_union():
    a = FinSet(["a"])
    Pa = powerset(a)
    PPa = powerset(Pa)
    ordPP = FinOrder(PPa, lambda A, B: A <= B, join=lambda S: frozenset().union(*S))
    ordP = FinOrder(Pa, lambda A, B: A <= B, join=lambda S: frozenset().union(*S))
    union = FinMap(PPa, Pa, lambda AA: frozenset().union(*AA))
    star = right_adjoint(union, ordPP, ordP)
    for S in Pa:
        assert star(S) == frozenset(T for T in Pa if T <= S)


def test_right_adjoint_requires_join_preservation():
    order = chain_order(FinSet(["0", "1"]))
    const_top = FinMap(order.carrier, order.carrier, lambda x: "1")
    with pytest.raises(NoAdjoint):
        right_adjoint(const_top, order, order)


@given(st.lists(st.integers(0, 4), min_size=5, max_size=5))
def test_right_adjoint_galois_on_chains(values):
    # any monotone map between chains preserving bottom preserves all joins
    vals = sorted(values)
    vals[0] = 0
    C5 = chain_order(FinSet([str(i) for i in range(5)]))
    f = FinMap(C5.carrier, C5.carrier, [str(v) for v in vals])
    star = right_adjoint(f, C5, C5)
    for x, y in product(C5.carrier, C5.carrier):
        assert C5.leq(f(x), y) == C5.leq(x, star(y))


def _lattice(elements, covers):
    X = FinSet(elements)
    rel = {(x, x) for x in elements} | set(covers)
    changed = True
    while changed:
        new = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        changed = bool(new)
        rel |= new
    return FinOrder(X, lambda a, b: (a, b) in rel)


def test_chain_is_distributive():
    assert is_distributive(chain_order(FinSet(["0", "1", "2", "3"])))


def test_diamond_M3_is_not_distributive():
    m3 = _lattice(["0", "x", "y", "z", "1"],
                  [("0", "x"), ("0", "y"), ("0", "z"), ("x", "1"), ("y", "1"), ("z", "1")])
    v = is_distributive(m3)
    assert not v
    assert sorted(v.witness) == ["x", "y", "z"]


def test_boolean_lattice_is_distributive():
    PX = powerset(FinSet(["a", "b", "c"]))
    assert is_distributive(FinOrder(PX, lambda A, B: A <= B))


def test_product_and_unitors():
    a = FinSet(["a"])
    assert list(product_set(a, FinSet(["0", "1"]))) == [("a", "0"), ("a", "1")]
    rho = right_unitor(AB)
    assert rho.is_bijective() and rho("a") == ("a", "*")
    lam = left_unitor(AB)
    assert lam.is_bijective() and lam("b") == ("*", "b")
    ups = associator(FinSet(["a"]), FinSet(["b"]), FinSet(["c"]))
    assert ups(("a", ("b", "c"))) == (("a", "b"), "c")
    assert len(ONE) == 1


def test_all_maps_counts_and_order():
    maps = list(all_maps(AB, FinSet(["0", "1", "2"])))
    assert len(maps) == 9
    assert maps[0].values == ("0", "0") and maps[-1].values == ("2", "2")


def test_order_matrix_helpers():
    c = chain_order(FinSet(["0", "1", "2"]))
    assert c.is_poset()
    assert np.array_equal(c.matrix, np.triu(np.ones((3, 3), dtype=bool)))
    assert c.top() == "2" and c.bottom() == "0"
    assert c.join(["0", "1"]) == "1" and c.meet(["1", "2"]) == "1"
