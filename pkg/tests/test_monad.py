from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import monad

from kleislilab.errors import ModeUnsupported
from kleislilab.monad import (check_enrichment, check_lax_monoidal, check_monad_laws,
                              kleisli_compose, order_on_T, witness_levels)
from kleislilab.order import FinMap, FinSet, all_maps
from kleislilab.report import CAP, PASS, Caps

X2 = FinSet(["0", "1"])
Y2 = FinSet(["a", "b"])
ONE = FinSet(["u"])


def test_P_monad_laws_exhaustive_at_two_points():
    rep = check_monad_laws(monad("P"), X2, "exhaustive")
    assert rep.ok
    assert rep.find("assoc").stats["checked"] == 65536


def test_F_monad_laws_exhaustive_at_two_points():
    assert check_monad_laws(monad("F"), X2, "exhaustive").ok


def test_U_witness_mode_and_exhaustive_caps():
    U = monad("U")
    assert check_monad_laws(U, X2, "witness").ok
    rep = check_monad_laws(U, X2, "exhaustive")
    assert rep.verdict == CAP
    assert rep.find("unit-left").verdict == PASS
    assert rep.find("assoc").verdict == CAP


def test_enrichment():
    assert check_enrichment(monad("P"), X2, Y2, "exhaustive").ok
    assert check_enrichment(monad("PV-bool2"), X2, Y2, "exhaustive").ok
    assert check_enrichment(monad("U"), X2, Y2, "witness").ok


def test_lax_monoidal_examples():
    assert check_lax_monoidal(monad("P"), X2, Y2, ONE, "exhaustive").ok
    assert check_lax_monoidal(monad("F"), X2, Y2, ONE, "exhaustive").ok
    rep = check_lax_monoidal(monad("U"), X2, FinSet(["a"]), ONE, "exhaustive",
                             parts=["M1", "M2", "M3", "M5", "kappa-monotone"])
    assert rep.ok


def test_unknown_mode():
    with pytest.raises(ModeUnsupported):
        check_monad_laws(monad("P"), X2, "sampled")


def test_caps_from_env(monkeypatch):
    monkeypatch.setenv("KLEISLILAB_CAPS", "tx=10,homs=5")
    caps = Caps.from_env(ttx=7)
    assert (caps.tx, caps.ttx, caps.homs) == (10, 7, 5)


def test_witness_levels_are_deterministic():
    U = monad("U")
    a = witness_levels(U, FinSet(["0", "1", "2", "3"]), 2, seed=3)
    b = witness_levels(U, FinSet(["0", "1", "2", "3"]), 2, seed=3)
    assert a == b
    assert len(a[0]) == U.size(4)


def test_order_on_T_is_refinement_order():
    for key in ("P", "F", "U", "PV-luk3"):
        m = monad(key)
        order = order_on_T(m, X2)
        TX = list(order.carrier)
        assert all(order.leq(a, b) == m.leq(a, b) for a in TX for b in TX)


def test_kleisli_composition_of_pure_maps():
    P = monad("P")
    e = FinMap(X2, Y2, {"0": "a", "1": "a"})
    f = FinMap(Y2, X2, {"a": "1", "b": "0"})
    g = {y: P.unit(f(y)) for y in Y2}
    h = {x: P.unit(e(x)) for x in X2}
    assert kleisli_compose(P, g, h) == {x: P.unit(f(e(x))) for x in X2}


def test_kleisli_composition_of_chain_is_idempotent():
    P = monad("P")
    down = {"0": frozenset({"0"}), "1": frozenset({"0", "1"})}
    assert kleisli_compose(P, down, down) == down


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_kleisli_composition_is_associative(data):
    for key in ("P", "F", "U", "PV-luk3"):
        m = monad(key)
        TX = list(m.T_obj(X2))
        f, g, h = ({x: data.draw(st.sampled_from(TX)) for x in X2} for _ in range(3))
        left = kleisli_compose(m, f, kleisli_compose(m, g, h))
        right = kleisli_compose(m, kleisli_compose(m, f, g), h)
        assert left == right


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_enrichment_property(data):
    # f <= g pointwise implies mu . Tf <= mu . Tg at every element
    for key in ("P", "F", "U", "PV-luk3"):
        m = monad(key)
        TX = list(m.T_obj(X2))
        f = {x: data.draw(st.sampled_from(TX)) for x in X2}
        g = {x: m.join([f[x], data.draw(st.sampled_from(TX))]) for x in X2}
        t = data.draw(st.sampled_from(TX))
        assert m.leq(m.mult(m.fmap(f.__getitem__, t)), m.mult(m.fmap(g.__getitem__, t)))


def test_functor_on_pure_maps():
    P = monad("P")
    for f in all_maps(X2, Y2):
        for t in P.T_obj(X2):
            assert P.fmap(f, t) == f.image(t)
