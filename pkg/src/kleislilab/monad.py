"""Generic operations and law checkers over any :class:`~kleislilab.instances.Monad`.

Checkers run in one of two modes.  ``exhaustive`` materializes TX, TTX and
TTTX as needed and raises nothing: a part whose objects exceed the caps is
reported as ``cap-exceeded``.  ``witness`` evaluates the same equations at
generator-described elements (see :func:`witness_levels`).
"""

from __future__ import annotations

import random
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .errors import CapExceeded, ModeUnsupported
from .instances import FilterMonad, Monad, PowersetMonad, sample
from .order import (FinOrder, FinSet, SupStructure, TWO, all_maps, induced_order,
                    product_set)
from .report import CheckReport

MODES = ("exhaustive", "witness")
WITNESS_BUDGET = 20_000
POOL_LIMIT = 64
PAIR_BUDGET = 20_000


def _check_mode(mode: str, allowed=MODES) -> None:
    if mode not in allowed:
        raise ModeUnsupported(f"mode {mode!r} not in {allowed}")


def T_obj(m: Monad, X: FinSet, cap: str = "tx") -> FinSet:
    return m.T_obj(X, cap)


def TT_obj(m: Monad, X: FinSet) -> FinSet:
    return m.T_obj(m.T_obj(X), "ttx")


def TTT_obj(m: Monad, X: FinSet) -> FinSet:
    return m.T_obj(TT_obj(m, X), "ttx")


def sup_structure(m: Monad, X: FinSet) -> SupStructure:
    """The sup-structure ``S -> mu_X(tau_TX(S))`` on TX."""
    return SupStructure(m.T_obj(X), lambda S: m.mult(m.tau(frozenset(S))))


def order_on_T(m: Monad, X: FinSet, verify_limit: int = 256) -> FinOrder:
    """The order on TX induced by ``mu . tau``.

    Up to ``verify_limit`` elements the relation matrix is built from the
    sup-structure and validated by :func:`induced_order`.  Above it the order
    is returned lazily: ``x <= y`` is still decided by ``mu(tau{x, y}) == y``.
    """
    s = sup_structure(m, X)
    if len(s.carrier) <= verify_limit:
        order = induced_order(s)
        return FinOrder(s.carrier, order.matrix, join=order._join,
                        meet=lambda S: m.meet(S, X))
    return FinOrder(s.carrier, lambda a, b: s.sup(frozenset((a, b))) == b,
                    join=lambda S: s.sup(frozenset(S)), meet=lambda S: m.meet(S, X))


def kleisli_compose(m: Monad, g: Mapping | Callable, h: Mapping) -> dict:
    """``g o h = mu . Tg . h`` as a table over the domain of ``h``."""
    gf = g.__getitem__ if isinstance(g, Mapping) else g
    return {z: m.mult(m.fmap(gf, t)) for z, t in h.items()}


# --- witnesses ---------------------------------------------------------------

def generated(m: Monad, pool: Sequence, budget: int = WITNESS_BUDGET, seed: int = 0) -> list:
    """Tier-A generated elements over ``pool``, else tier B, else a seeded sample."""
    for tier in ("A", "B"):
        if m.generated_count(len(pool), tier) <= budget:
            return list(m.generated(pool, tier))
    return sample(list(m.generated(pool, "B")), budget, seed)


def witness_levels(m: Monad, X: FinSet, depth: int, budget: int = WITNESS_BUDGET,
                   seed: int = 0) -> list[list]:
    """Witness sets for TX, TTX, ... (``depth`` levels).

    Level 1 is all of TX when it fits the budget, listing the elements
    generated over X first so that the pools of later levels prefer them.
    Level k+1 is generated (see ``Monad.generated``) from the first
    ``POOL_LIMIT`` elements of level k.
    """
    level = generated(m, list(X), budget, seed)
    if m.size(len(X)) <= min(budget, m.caps.tx):
        seen = set(level)
        level = level + [t for t in m.T_obj(X) if t not in seen]
    levels = [level]
    for d in range(1, depth):
        levels.append(generated(m, levels[-1][:POOL_LIMIT], budget, seed + d))
    return levels


def _pairs(A: Sequence, B: Sequence, budget: int, seed: int) -> list[tuple]:
    if len(A) * len(B) <= budget:
        return list(product(A, B))
    rng = random.Random(seed)
    idx = sorted(rng.sample(range(len(A) * len(B)), budget))
    return [(A[i // len(B)], B[i % len(B)]) for i in idx]


def _elements(m: Monad, X: FinSet, level: int, mode: str, seed: int) -> list:
    """TX (level 1), TTX (2) or TTTX (3): materialized or witnessed."""
    if mode == "exhaustive":
        obj = m.T_obj(X)
        for _ in range(level - 1):
            obj = m.T_obj(obj, "ttx")
        return list(obj)
    return witness_levels(m, X, level, seed=seed)[level - 1]


def _scan(rep: CheckReport, name: str, items: Callable[[], Iterable], ok: Callable, **stats):
    """Run one law over lazily produced items, recording caps and the first failure."""
    try:
        its = items()
        n = 0
        for it in its:
            n += 1
            if not ok(it):
                return rep.law(name, n, it, **stats)
        return rep.law(name, n, None, **stats)
    except CapExceeded as exc:
        return rep.cap(name, exc)


# --- monad laws --------------------------------------------------------------

MONAD_PARTS = ("unit-left", "unit-right", "assoc", "functor", "naturality-eta",
               "naturality-mu", "naturality-tau", "naturality-kappa", "tau-unit", "tau-mult")


def _small_maps(X: FinSet, limit: int = 64) -> list:
    maps = []
    for Y in (X, TWO):
        for f in all_maps(X, Y):
            maps.append(f)
            if len(maps) >= limit:
                return maps
    return maps


def check_monad_laws(m: Monad, X: FinSet, mode: str = "exhaustive",
                     parts: Sequence[str] | None = None, seed: int = 0) -> CheckReport:
    """Monad laws, functoriality, naturality of eta/mu/tau/kappa and the tau equations.

    Naturality is checked along all maps ``X -> X`` and ``X -> 2`` (at most 64).
    """
    _check_mode(mode)
    parts = list(parts or MONAD_PARTS)
    rep = CheckReport(f"monad laws {m.label} |X|={len(X)}", stats={"mode": mode})
    el = lambda lvl: lambda: _elements(m, X, lvl, mode, seed)  # noqa: E731
    maps = _small_maps(X)
    with rep.timed():
        if "unit-left" in parts:
            _scan(rep, "unit-left", el(1), lambda t: m.mult(m.fmap(m.unit, t)) == t)
        if "unit-right" in parts:
            _scan(rep, "unit-right", el(1), lambda t: m.mult(m.unit(t)) == t)
        if "assoc" in parts:
            _scan(rep, "assoc", el(3), lambda t: m.mult(m.mult(t)) == m.mult(m.fmap(m.mult, t)))
        if "functor" in parts:
            def functor_items():
                small = [FinSet(range(k)) for k in (1, 2)]
                for A in small:
                    TA = _elements(m, A, 1, mode, seed)
                    for B in small:
                        for C in small:
                            for f in all_maps(A, B):
                                for g in all_maps(B, C):
                                    for t in TA:
                                        yield f, g, t
            _scan(rep, "functor", functor_items,
                  lambda it: m.fmap(lambda x: x, it[2]) == it[2]
                  and m.fmap(it[1].compose(it[0]), it[2]) == m.fmap(it[1], m.fmap(it[0], it[2])))
        if "naturality-eta" in parts:
            _scan(rep, "naturality-eta", lambda: ((f, x) for f in maps for x in X),
                  lambda it: m.fmap(it[0], m.unit(it[1])) == m.unit(it[0](it[1])))
        if "naturality-mu" in parts:
            def mu_items():
                TT = _elements(m, X, 2, mode, seed)
                return ((f, t) for f in maps for t in TT)
            _scan(rep, "naturality-mu", mu_items,
                  lambda it: m.fmap(it[0], m.mult(it[1]))
                  == m.mult(m.fmap(m.T_map(it[0]), it[1])))
        if "naturality-tau" in parts:
            _scan(rep, "naturality-tau", lambda: ((f, A) for f in maps for A in X.subsets()),
                  lambda it: m.fmap(it[0], m.tau(it[1])) == m.tau(it[0].image(it[1])))
        if "naturality-kappa" in parts:
            def kappa_items():
                TX = _elements(m, X, 1, mode, seed)
                fs = maps[:8]
                return ((f, g, a, b) for f in fs for g in fs
                        for a, b in _pairs(TX, TX, PAIR_BUDGET // 64, seed))
            _scan(rep, "naturality-kappa", kappa_items,
                  lambda it: m.fmap(lambda p: (it[0](p[0]), it[1](p[1])), m.kappa(it[2], it[3]))
                  == m.kappa(m.fmap(it[0], it[2]), m.fmap(it[1], it[3])))
        if "tau-unit" in parts:
            _scan(rep, "tau-unit", lambda: iter(X), lambda x: m.tau(frozenset((x,))) == m.unit(x))
        if "tau-mult" in parts:
            def pp_items():
                PX = list(X.subsets())
                if mode == "exhaustive" or 2 ** len(PX) <= WITNESS_BUDGET:
                    return FinSet(PX).subsets()
                return PowersetMonad.generated(m, PX, "A")
            _scan(rep, "tau-mult", pp_items,
                  lambda AA: m.tau(frozenset().union(*AA)) == m.mult(m.fmap(m.tau, m.tau(AA))))
    return rep


# --- powerset enrichment -----------------------------------------------------

def _ordered_map_pairs(m: Monad, X: FinSet, Y: FinSet, mode: str, seed: int, budget: int):
    """Pairs ``f <= g`` of maps ``X -> TY`` (as value tuples along X)."""
    TY = list(m.T_obj(Y)) if mode == "exhaustive" or m.size(len(Y)) <= WITNESS_BUDGET \
        else witness_levels(m, Y, 1, seed=seed)[0]
    ups = [[b for b in TY if m.leq(a, b)] for a in TY]
    if mode == "exhaustive":
        pairs = sum(len(u) for u in ups) ** len(X)
        m.caps.check(f"ordered map pairs X -> T{m.kind}Y times |TX|",
                     pairs * m.size(len(X)), "homs")
        for f in product(range(len(TY)), repeat=len(X)):
            for g in product(*[ups[i] for i in f]):
                yield tuple(TY[i] for i in f), g
        return
    rng = random.Random(seed)
    for _ in range(budget):
        f = [rng.randrange(len(TY)) for _ in X]
        yield tuple(TY[i] for i in f), tuple(rng.choice(ups[i]) for i in f)


def check_enrichment(m: Monad, X: FinSet, Y: FinSet, mode: str = "exhaustive",
                     seed: int = 0, budget: int = 2000) -> CheckReport:
    """Condition (order enrichment): ``f <= g`` implies ``mu . Tf <= mu . Tg`` pointwise."""
    _check_mode(mode)
    rep = CheckReport(f"enrichment {m.label} |X|={len(X)} |Y|={len(Y)}", stats={"mode": mode})
    idx = {x: i for i, x in enumerate(X)}

    def items():
        TX = _elements(m, X, 1, mode, seed)
        for f, g in _ordered_map_pairs(m, X, Y, mode, seed, budget):
            for t in TX:
                yield f, g, t

    def ok(it):
        f, g, t = it
        lhs = m.mult(m.fmap(lambda x: f[idx[x]], t))
        rhs = m.mult(m.fmap(lambda x: g[idx[x]], t))
        return m.leq(lhs, rhs)

    with rep.timed():
        _scan(rep, "enrichment", items, ok)
    return rep


# --- lax monoidal structure --------------------------------------------------

LAX_PARTS = ("M1", "M2", "M3", "M4", "M5", "kappa-monotone")


def check_lax_monoidal(m: Monad, X: FinSet, Y: FinSet, Z: FinSet, mode: str = "exhaustive",
                       parts: Sequence[str] | None = None, seed: int = 0) -> CheckReport:
    """(M1)(M2) as equalities, (M3)(M4)(M5) as inequalities, and monotonicity of kappa."""
    _check_mode(mode)
    parts = list(parts or LAX_PARTS)
    rep = CheckReport(f"lax monoidal {m.label} sizes ({len(X)},{len(Y)},{len(Z)})",
                      stats={"mode": mode})
    T1 = lambda S: _elements(m, S, 1, mode, seed)  # noqa: E731
    k = m.kappa
    with rep.timed():
        if "M1" in parts:
            assoc = lambda p: ((p[0], p[1][0]), p[1][1])  # noqa: E731
            _scan(rep, "M1", lambda: product(T1(X), T1(Y), T1(Z)),
                  lambda it: m.fmap(assoc, k(it[0], k(it[1], it[2]))) == k(k(it[0], it[1]), it[2]))
        if "M2" in parts:
            star = m.unit("*")
            _scan(rep, "M2", lambda: iter(T1(X)),
                  lambda a: m.fmap(lambda x: (x, "*"), a) == k(a, star)
                  and m.fmap(lambda x: ("*", x), a) == k(star, a))
        if "M3" in parts:
            _scan(rep, "M3", lambda: product(X, Y),
                  lambda p: m.leq(m.unit(p), k(m.unit(p[0]), m.unit(p[1]))))
        if "M4" in parts:
            def tt_pairs():
                A = _elements(m, X, 2, mode, seed)
                B = _elements(m, Y, 2, mode, seed + 1)
                if mode == "exhaustive":
                    return product(A, B)
                return iter(_pairs(A, B, PAIR_BUDGET, seed))
            kap = lambda p: k(p[0], p[1])  # noqa: E731
            _scan(rep, "M4", tt_pairs,
                  lambda it: m.leq(m.mult(m.fmap(kap, k(it[0], it[1]))),
                                   k(m.mult(it[0]), m.mult(it[1]))))
        if "M5" in parts:
            _scan(rep, "M5", lambda: product(X.subsets(), Y.subsets()),
                  lambda it: m.leq(m.tau(frozenset(product(it[0], it[1]))),
                                   k(m.tau(it[0]), m.tau(it[1]))))
        if "kappa-monotone" in parts:
            def mono_items():
                A, B = T1(X), T1(Y)
                for a, a2 in _pairs(A, A, PAIR_BUDGET // 4, seed):
                    if m.leq(a, a2):
                        for b in B[:64]:
                            yield "left", a, a2, b
                for b, b2 in _pairs(B, B, PAIR_BUDGET // 4, seed):
                    if m.leq(b, b2):
                        for a in A[:64]:
                            yield "right", b, b2, a

            def mono_ok(it):
                side, u, u2, w = it
                if side == "left":
                    return m.leq(k(u, w), k(u2, w))
                return m.leq(k(w, u), k(w, u2))
            _scan(rep, "kappa-monotone", mono_items, mono_ok)
    return rep


def check_all_laws(m: Monad, size: int, mode: str = "exhaustive", seed: int = 0) -> CheckReport:
    """The monad, enrichment and lax-monoidal suites at carrier size ``size``."""
    X = FinSet([str(i) for i in range(size)])
    Y = FinSet([chr(ord("a") + i) for i in range(size)])
    rep = CheckReport(f"laws {m.label} size {size}", stats={"mode": mode, "size": size})
    rep.add(check_monad_laws(m, X, mode, seed=seed))
    rep.add(check_enrichment(m, X, Y, mode, seed=seed))
    rep.add(check_lax_monoidal(m, X, Y, FinSet(["u"]), mode, seed=seed))
    return rep


# --- the finite isomorphism F = P --------------------------------------------

def check_filter_powerset_iso(X: FinSet) -> CheckReport:
    """The generator map ``up A -> A`` commutes with all monad data (exhaustive at TTX)."""
    F, P = FilterMonad(), PowersetMonad()
    rep = CheckReport(f"F = P on |X|={len(X)}")
    phi = lambda f: f.gen  # noqa: E731
    phi2 = lambda ff: frozenset(phi(f) for f in ff.gen)  # noqa: E731
    FX = list(F.T_obj(X))
    rep.law("bijective", len(FX), None if len({phi(f) for f in FX}) == 2 ** len(X) else FX)
    _scan(rep, "fmap", lambda: ((f, t) for f in _small_maps(X) for t in FX),
          lambda it: phi(F.fmap(it[0], it[1])) == P.fmap(it[0], phi(it[1])))
    _scan(rep, "unit", lambda: iter(X), lambda x: phi(F.unit(x)) == P.unit(x))
    _scan(rep, "tau", X.subsets, lambda A: phi(F.tau(A)) == P.tau(A))
    _scan(rep, "mult", lambda: iter(F.T_obj(F.T_obj(X), "ttx")),
          lambda ff: phi(F.mult(ff)) == P.mult(phi2(ff)))
    _scan(rep, "kappa", lambda: product(FX, FX),
          lambda it: phi(F.kappa(*it)) == P.kappa(phi(it[0]), phi(it[1])))
    _scan(rep, "order", lambda: product(FX, FX),
          lambda it: F.leq(*it) == (phi(it[0]) <= phi(it[1])))
    return rep
