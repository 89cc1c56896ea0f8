"""Eilenberg-Moore algebras, their induced orders, the functor L and the test algebras."""

from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .errors import MalformedSurface, ModeUnsupported
from .instances import Filter, Monad, UpFamily
from .kleisli import KleisliMonoid
from .monad import _scan, generated, order_on_T, witness_levels
from .order import FinMap, FinOrder, FinSet, SupStructure, TWO, induced_order, right_adjoint
from .report import CheckReport, jsonable

ALGEBRA_MODES = ("exhaustive", "characterization", "witness")


class Algebra:
    """A carrier A with ``a: TA -> A``, given as a callable or a table.

    ``sup(S) = a(tau(S))`` is the induced sup-structure; ``order`` and
    ``adjoint`` (the right adjoint ``a*``) are computed on first use.
    """

    def __init__(self, monad: Monad, carrier: FinSet, a: Callable | dict,
                 name: str | None = None):
        self.monad = monad
        self.carrier = carrier
        self.table = a if isinstance(a, dict) else None
        self._a = a.__getitem__ if isinstance(a, dict) else a
        self.name = name or "algebra"

    def __repr__(self) -> str:
        return f"Algebra({self.monad.label}, {self.name})"

    def __call__(self, t):
        return self._a(t)

    def sup(self, S: Iterable):
        return self._a(self.monad.tau(frozenset(S)))

    @cached_property
    def order(self) -> FinOrder:
        """The induced order ``x <= y iff a(tau{x, y}) = y``; NotALattice if broken."""
        return induced_order(SupStructure(self.carrier, self.sup))

    @cached_property
    def adjoint(self) -> FinMap:
        """``a*: A -> TA`` via :func:`right_adjoint` over the order on TA."""
        m = self.monad
        TA = order_on_T(m, self.carrier)
        a = FinMap(TA.carrier, self.carrier, self._a, check=False)
        return right_adjoint(a, TA, self.order)

    def to_json(self):
        m = self.monad
        return {"carrier": jsonable(self.carrier),
                "a": [[m.encode(t), jsonable(self._a(t))] for t in m.T_obj(self.carrier)]}


def L(alg: Algebra) -> KleisliMonoid:
    """``(A, a)`` to ``(A, a*)``, carrying the induced order as designated order."""
    adj = alg.adjoint
    return KleisliMonoid(alg.monad, alg.carrier, {x: adj(x) for x in alg.carrier},
                         order=alg.order, name=f"L({alg.name})")


def _law_unit(rep: CheckReport, alg: Algebra) -> None:
    m = alg.monad
    _scan(rep, "unit", lambda: iter(alg.carrier), lambda x: alg(m.unit(x)) == x)


def _law_mult(rep: CheckReport, alg: Algebra, items: Callable[[], Iterable], name="mult") -> None:
    m = alg.monad
    _scan(rep, name, items, lambda ff: alg(m.mult(ff)) == alg(m.fmap(alg, ff)))


def check_algebra(alg: Algebra, mode: str = "exhaustive", seed: int = 0,
                  elements: Sequence | None = None) -> CheckReport:
    """The laws ``a . eta = 1`` and ``a . mu = a . Ta``.

    ``exhaustive`` scans all of TTA.  ``characterization`` uses an equivalent
    description: P/F, every ``a(S)`` is the least upper bound of S in the
    induced order; PV, ``a(phi) = join phi(x) . x`` for the derived action
    ``v . x = a(v at x)`` plus the action and join-preservation laws; U, the
    unit law exhaustively and the multiplication law at all TTA elements
    with at most two generators (a budgeted set, see ``Monad.generated``).
    ``witness`` checks both laws at ``elements`` (default: generated TTA).
    """
    if mode not in ALGEBRA_MODES:
        raise ModeUnsupported(f"mode {mode!r} not in {ALGEBRA_MODES}")
    m = alg.monad
    A = alg.carrier
    rep = CheckReport(f"algebra {alg.name}", stats={"mode": mode, "monad": m.label})
    with rep.timed():
        if mode == "exhaustive":
            _law_unit(rep, alg)
            _law_mult(rep, alg, lambda: iter(m.T_obj(m.T_obj(A), "ttx")))
        elif mode == "witness":
            _law_unit(rep, alg)
            items = (lambda: iter(elements)) if elements is not None else \
                (lambda: iter(witness_levels(m, A, 2, seed=seed)[1]))
            _law_mult(rep, alg, items)
            rep.stats["scope"] = "witness"
        elif m.kind in ("P", "F"):
            _characterize_sup(rep, alg)
        elif m.kind == "PV":
            _characterize_module(rep, alg, seed)
        else:
            _law_unit(rep, alg)
            _law_mult(rep, alg, lambda: iter(tt_witnesses(m, A, seed)))
            rep.stats["scope"] = "witness"
    return rep


def tt_witnesses(m: Monad, A: FinSet, seed: int = 0) -> list:
    """TTA elements generated by at most two generators over a pool of small TA elements."""
    if m.size(len(A)) <= 64:
        pool = list(m.T_obj(A))
    else:
        pool = generated(m, list(A), seed=seed)[:64]
    return generated(m, pool, seed=seed)


def _characterize_sup(rep: CheckReport, alg: Algebra) -> None:
    from .errors import NotALattice
    try:
        order = alg.order
    except NotALattice as exc:
        rep.law("induced-order", 0, str(exc))
        return
    rep.law("induced-order", len(alg.carrier))

    def lub(S):
        s = alg.sup(S)
        if any(not order.leq(x, s) for x in S):
            return False
        return all(order.leq(s, u) for u in alg.carrier if all(order.leq(x, u) for x in S))
    _scan(rep, "sup-is-lub", alg.carrier.subsets, lub)
    m = alg.monad
    # every element of PA / FA is tau of its (generator) subset
    gen = (lambda t: t) if m.kind == "P" else (lambda t: t.gen)
    _scan(rep, "a-is-sup", lambda: iter(m.T_obj(alg.carrier)), lambda t: alg(t) == alg.sup(gen(t)))
    rep.stats["scope"] = "complete"


def _characterize_module(rep: CheckReport, alg: Algebra, seed: int) -> None:
    from .errors import NotALattice
    m = alg.monad
    q = m.quantale
    A = alg.carrier
    try:
        order = alg.order
    except NotALattice as exc:
        rep.law("induced-order", 0, str(exc))
        return
    rep.law("induced-order", len(A))
    act = lambda v, x: alg(m.vfun({x: v}))  # noqa: E731
    join = lambda xs: alg.sup(xs)  # noqa: E731
    _scan(rep, "action-unit", lambda: iter(A), lambda x: act(q.unit, x) == x)
    _scan(rep, "action-assoc", lambda: ((u, v, x) for u in q.carrier for v in q.carrier for x in A),
          lambda it: act(q.tensor(it[0], it[1]), it[2]) == act(it[0], act(it[1], it[2])))
    _scan(rep, "action-joins-left", lambda: ((S, x) for S in q.carrier.subsets() for x in A),
          lambda it: act(q.join(it[0]), it[1]) == join(act(s, it[1]) for s in it[0]))
    subsets = A.subsets() if len(A) <= 12 else \
        iter([frozenset()] + [frozenset(p) for p in combinations(A, 2)])
    subsets = list(subsets)
    _scan(rep, "action-joins-right", lambda: ((v, B) for v in q.carrier for B in subsets),
          lambda it: act(it[0], join(it[1])) == join(act(it[0], b) for b in it[1]))
    if m.size(len(A)) <= m.caps.tx:
        phis = lambda: iter(m.T_obj(A))  # noqa: E731
        rep.stats["scope"] = "complete"
    else:
        phis = lambda: iter(witness_levels(m, A, 1, seed=seed)[0])  # noqa: E731
        rep.stats["scope"] = "witness"
    _scan(rep, "a-is-weighted-join", phis,
          lambda phi: alg(phi) == join(act(v, x) for x, v in phi.items()))
    if len(subsets) < 2 ** len(A):
        rep.stats["scope"] = "witness"


# --- test algebras -----------------------------------------------------------

def _q_powerset(S) -> str:
    return "1" if "1" in S else "0"


def _q_filter(f: Filter) -> str:
    # meet over the members A of up(G) of join(A) is attained at A = G
    return "1" if "1" in f.gen else "0"


def _q_upset(u: UpFamily) -> str:
    # some member has join 0 iff some generator lies inside {0}; the empty family gives 1
    return "0" if any(g <= {"0"} for g in u.gens) else "1"


def test_algebra(m: Monad, validate: bool = True) -> Algebra:
    """The dualizer V of each monad.

    P: (2, join).  F: the Sierpinski algebra ``q(f) = meet_{A in f} join A``.
    U: 2 with the same formula.  PV: (V, ``q(phi) = join phi(v) (x) v``).
    """
    if m.kind == "P":
        alg = Algebra(m, TWO, _q_powerset, name="2")
    elif m.kind == "F":
        alg = Algebra(m, TWO, _q_filter, name="Sierpinski")
    elif m.kind == "U":
        alg = Algebra(m, TWO, _q_upset, name="Sierpinski")
    elif m.kind == "PV":
        q = m.quantale
        alg = Algebra(m, q.carrier,
                      lambda phi: q.join(q.tensor(w, v) for v, w in phi.items()), name="V")
    else:
        raise MalformedSurface(f"no test algebra for {m.kind}")
    if validate:
        mode = "exhaustive" if m.fits(len(alg.carrier), 2, m.caps.ttx) else "characterization"
        rep = check_algebra(alg, mode)
        assert rep.ok, rep.summary()
    return alg


# keep pytest from collecting the builder when it is imported into test modules
test_algebra.__test__ = False


def algebra_from_json(m: Monad, data: dict) -> Algebra:
    """``{"carrier": [...], "a": [[encoded TA element, value], ...]}``; the table must be total."""
    if not isinstance(data, dict) or set(data) - {"carrier", "a", "monad", "name"}:
        raise MalformedSurface("algebra must have keys carrier, a (and optionally monad, name)")
    A = FinSet.named(data["carrier"])
    table = {}
    for pair in data["a"]:
        if not isinstance(pair, list) or len(pair) != 2:
            raise MalformedSurface(f"bad algebra table entry {pair!r}")
        t = m.decode(pair[0], A)
        if str(pair[1]) not in A:
            raise MalformedSurface(f"value {pair[1]!r} not in carrier")
        table[t] = str(pair[1])
    TA = m.T_obj(A)
    missing = [t for t in TA if t not in table]
    if missing or len(table) != len(TA):
        raise MalformedSurface(f"algebra table not total on TA ({len(missing)} missing)")
    return Algebra(m, A, table, name=data.get("name"))
