"""Kleisli monoids (T-monoids), homomorphisms, box products and (co)limit structures."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Sequence

from .errors import CapExceeded, MonadMismatch
from .instances import Monad
from .monad import kleisli_compose, order_on_T
from .order import (FinMap, FinOrder, FinSet, ONE, _label, all_maps, associator,
                    left_unitor, product_set, right_adjoint, right_unitor)
from .report import CheckReport, Verdict, jsonable


class KleisliMonoid:
    """A carrier X with a structure map ``alpha: X -> TX``.

    ``order`` is an optional designated order on the carrier (test algebras
    supply theirs); hom-sets into this monoid are ordered pointwise by it.
    """

    __slots__ = ("monad", "carrier", "alpha", "order", "name", "_hash")

    def __init__(self, monad: Monad, carrier: FinSet, alpha: dict,
                 order: FinOrder | None = None, name: str | None = None):
        if set(alpha) != set(carrier.elements):
            raise ValueError("alpha must be defined on exactly the carrier")
        self.monad = monad
        self.carrier = carrier
        self.alpha = {x: alpha[x] for x in carrier}
        self.order = order
        self.name = name
        self._hash = hash((carrier, tuple(self.alpha.values())))

    def __call__(self, x):
        return self.alpha[x]

    def __eq__(self, other) -> bool:
        return (isinstance(other, KleisliMonoid) and self.monad == other.monad
                and self.carrier == other.carrier and self.alpha == other.alpha)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        label = self.name or f"{len(self.carrier)} points"
        return f"KleisliMonoid({self.monad.label}, {label})"

    def __len__(self) -> int:
        return len(self.carrier)

    def with_order(self, order: FinOrder | None) -> KleisliMonoid:
        return KleisliMonoid(self.monad, self.carrier, self.alpha, order, self.name)

    def carrier_order(self) -> FinOrder:
        """The designated order, else ``x <= y iff alpha(x) <= alpha(y)`` in TX."""
        if self.order is not None:
            return self.order
        m = self.monad
        return FinOrder(self.carrier, lambda x, y: m.leq(self.alpha[x], self.alpha[y]))

    def compose_self(self) -> dict:
        """``alpha (*) alpha = mu . T alpha . alpha``."""
        return kleisli_compose(self.monad, self.alpha, self.alpha)

    def to_json(self):
        return {_label(x): jsonable(t) for x, t in self.alpha.items()}


def unit_monoid(m: Monad) -> KleisliMonoid:
    """The monoidal unit ``E = (1, eta_1)``."""
    return KleisliMonoid(m, ONE, {"*": m.unit("*")}, name="E")


def discrete(m: Monad, X: FinSet) -> KleisliMonoid:
    return KleisliMonoid(m, X, {x: m.unit(x) for x in X}, name="discrete")


def indiscrete(m: Monad, X: FinSet) -> KleisliMonoid:
    top = m.top(X)
    return KleisliMonoid(m, X, {x: top for x in X}, name="indiscrete")


def check_monoid(c: KleisliMonoid, mu_star: bool | None = None) -> CheckReport:
    """Reflexivity ``eta <= alpha``, transitivity ``alpha (*) alpha <= alpha`` and the equality.

    With ``mu_star`` the structure is also checked to be a homomorphism into
    ``(TX, mu*)``, i.e. ``T alpha . alpha <= mu* . alpha`` in TTX; by default
    this runs only when TTX is within the ttx cap.
    """
    m, X = c.monad, c.carrier
    rep = CheckReport(f"monoid {c.name or ''}".strip(), stats={"points": len(X)})
    bad = next((x for x in X if not m.is_element(c.alpha[x], X)), None)
    rep.law("well-formed", len(X), None if bad is None else {"x": bad})
    if not rep.ok:
        return rep
    bad = next((x for x in X if not m.leq(m.unit(x), c.alpha[x])), None)
    rep.law("reflexive", len(X), None if bad is None else {"x": bad, "alpha": c.alpha[bad]})
    comp = c.compose_self()
    bad = next((x for x in X if not m.leq(comp[x], c.alpha[x])), None)
    rep.law("transitive", len(X),
            None if bad is None else {"x": bad, "composite": comp[bad], "alpha": c.alpha[bad]})
    if rep.ok:
        bad = next((x for x in X if comp[x] != c.alpha[x]), None)
        rep.law("idempotent", len(X), None if bad is None else {"x": bad})
    run = mu_star
    if run is None:
        run = m.fits(len(X), 2, m.caps.ttx)
    if run:
        try:
            TX = m.T_obj(X)  # noqa: F841  (caps the materialization mu* needs)
            star = {}
            bad = None
            for x in X:
                t = c.alpha[x]
                if t not in star:
                    star[t] = m.mult_adjoint(t, X)
                if not m.leq(m.fmap(c.alpha.__getitem__, t), star[t]):
                    bad = {"x": x}
                    break
            rep.law("mu-star-hom", len(X), bad)
        except CapExceeded as exc:
            rep.cap("mu-star-hom", exc)
    return rep


def is_monoid(c: KleisliMonoid) -> bool:
    return check_monoid(c, mu_star=False).ok


def _same_monad(a: KleisliMonoid, b: KleisliMonoid) -> None:
    if a.monad != b.monad:
        raise MonadMismatch(f"{a.monad.label} vs {b.monad.label}")


def is_hom(f: FinMap | Callable, src: KleisliMonoid, tgt: KleisliMonoid) -> Verdict:
    """``Tf . alpha <= beta . f`` pointwise; the witness is the first failing point."""
    _same_monad(src, tgt)
    m = src.monad
    for x in src.carrier:
        if not m.leq(m.fmap(f, src.alpha[x]), tgt.alpha[f(x)]):
            return Verdict(False, {"x": x})
    return Verdict(True)


@dataclass
class HomSet:
    """All homomorphisms ``source -> target`` in canonical order, ordered pointwise."""

    source: KleisliMonoid
    target: KleisliMonoid
    maps: list[FinMap]
    order: FinOrder = field(repr=False)
    order_source: str = "designated"

    @property
    def carrier(self) -> FinSet:
        return self.order.carrier

    def __len__(self) -> int:
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)


def hom_set(src: KleisliMonoid, tgt: KleisliMonoid) -> HomSet:
    """Enumerate ``[src, tgt]``; CapExceeded if ``|Y|^|X|`` exceeds the hom cap."""
    _same_monad(src, tgt)
    src.monad.caps.check("hom-set candidates", len(tgt.carrier) ** len(src.carrier), "homs")
    maps = list(_search_homs(src, tgt))
    tord = tgt.carrier_order()
    order = tord.pointwise(FinSet(maps))
    return HomSet(src, tgt, maps, order, "designated" if tgt.order is not None else "pullback")


def _search_homs(src: KleisliMonoid, tgt: KleisliMonoid):
    """Backtracking over value tuples in lexicographic order.

    The hom condition at x is tested as soon as f is fixed on x and on the
    support of ``alpha(x)``.
    """
    m = src.monad
    X, Y = src.carrier, tgt.carrier
    pos = {x: i for i, x in enumerate(X)}
    ready: list[list] = [[] for _ in X]
    for x in X:
        ready[max([pos[x]] + [pos[p] for p in m.support(src.alpha[x])])].append(x)
    vals: list = []

    def lookup(p):
        return vals[pos[p]]

    def rec(i: int):
        if i == len(X):
            yield FinMap(X, Y, tuple(vals), check=False)
            return
        for y in Y:
            vals.append(y)
            if all(m.leq(m.fmap(lookup, src.alpha[x]), tgt.alpha[lookup(x)]) for x in ready[i]):
                yield from rec(i + 1)
            vals.pop()
    return rec(0)


def box_product(a: KleisliMonoid, b: KleisliMonoid, check: bool = False) -> KleisliMonoid:
    """``(X x Y, kappa . (alpha x beta))``; with ``check`` the result is verified."""
    _same_monad(a, b)
    m = a.monad
    XY = product_set(a.carrier, b.carrier)
    alpha = {(x, y): m.kappa(a.alpha[x], b.alpha[y]) for x, y in XY}
    c = KleisliMonoid(m, XY, alpha, name=f"{a.name or 'X'} box {b.name or 'Y'}")
    if check:
        rep = check_monoid(c, mu_star=False)
        assert rep.ok, rep.summary()
    return c


def box_map(f: FinMap, g: FinMap) -> FinMap:
    """``f x g`` on the carriers of a box product."""
    src = product_set(f.domain, g.domain)
    tgt = product_set(f.codomain, g.codomain)
    return FinMap(src, tgt, [(f(x), g(y)) for x, y in src], check=False)


def monoidal_isos(a: KleisliMonoid, b: KleisliMonoid, c: KleisliMonoid) -> CheckReport:
    """The associator and unitors are T-monoid isomorphisms between box products."""
    m = a.monad
    E = unit_monoid(m)
    rep = CheckReport("monoidal isomorphisms")
    left = box_product(a, box_product(b, c))
    right = box_product(box_product(a, b), c)
    u = associator(a.carrier, b.carrier, c.carrier)
    for name, f, s, t in (("associator", u, left, right),
                          ("right-unitor", right_unitor(a.carrier), a, box_product(a, E)),
                          ("left-unitor", left_unitor(a.carrier), a, box_product(E, a))):
        fwd, bwd = is_hom(f, s, t), is_hom(f.inverse(), t, s)
        rep.law(name, 2, None if (fwd and bwd and f.is_bijective())
                else {"forward": fwd.witness, "backward": bwd.witness})
    return rep


def initial_structure(m: Monad, X: FinSet, cone: Sequence[tuple[FinMap, KleisliMonoid]],
                      adjoint: str = "closed") -> KleisliMonoid:
    """``alpha = meet_i (Tf_i)* . beta_i . f_i``, the largest structure making every f_i a hom.

    ``adjoint="closed"`` uses the closed-form right adjoint of ``Tf``;
    ``"generic"`` computes it with :func:`right_adjoint` over the materialized
    orders on TX and TY_i.  The empty cone gives the top structure.
    """
    for _, tgt in cone:
        if tgt.monad != m:
            raise MonadMismatch(f"{tgt.monad.label} vs {m.label}")
    adjoints: list[Callable] = []
    if adjoint == "generic":
        TXo = order_on_T(m, X)
        for f, tgt in cone:
            TYo = order_on_T(m, tgt.carrier)
            Tf = FinMap(TXo.carrier, TYo.carrier, lambda t, f=f: m.fmap(f, t), check=False)
            adjoints.append(right_adjoint(Tf, TXo, TYo))
    else:
        for f, _ in cone:
            adjoints.append(lambda t, f=f: m.fmap_adjoint(f, t))
    alpha = {}
    for x in X:
        alpha[x] = m.meet([adj(tgt.alpha[f(x)]) for adj, (f, tgt) in zip(adjoints, cone)], X)
    return KleisliMonoid(m, X, alpha, name="initial")


def final_structure(m: Monad, X: FinSet, cocone: Sequence[tuple[FinMap, KleisliMonoid]],
                    max_rounds: int = 64) -> KleisliMonoid:
    """The smallest structure making every ``g_i: Z_i -> X`` a hom.

    Start from ``eta`` joined with the images ``Tg_i(gamma_i(z))`` at
    ``g_i(z)`` and iterate ``alpha <- alpha (*) alpha`` to a fixpoint; every
    structure making the g_i homs lies above each iterate.
    """
    parts: dict = {x: [m.unit(x)] for x in X}
    for g, src in cocone:
        for z in src.carrier:
            parts[g(z)].append(m.fmap(g, src.alpha[z]))
    alpha = {x: m.join(ts) for x, ts in parts.items()}
    for _ in range(max_rounds):
        nxt = kleisli_compose(m, alpha, alpha)
        if nxt == alpha:
            return KleisliMonoid(m, X, alpha, name="final")
        alpha = nxt
    raise RuntimeError("final structure iteration did not converge")


def enumerate_monoids(m: Monad, X: FinSet) -> list[KleisliMonoid]:
    """All T-monoid structures on X, in lexicographic order of their alpha tables."""
    TX = list(m.T_obj(X))
    m.caps.check("candidate structures |TX|^|X|", len(TX) ** len(X), "homs")
    refl = [[t for t in TX if m.leq(m.unit(x), t)] for x in X]
    out = []
    for vals in product(*refl):
        alpha = dict(zip(X.elements, vals))
        comp = kleisli_compose(m, alpha, alpha)
        if all(m.leq(comp[x], alpha[x]) for x in X):
            out.append(KleisliMonoid(m, X, alpha))
    for i, c in enumerate(out):
        c.name = f"{m.kind}{len(X)}-{i}"
    return out
