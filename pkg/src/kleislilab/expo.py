"""Exponentiability: conv, its closed forms, nbhd = conv*, couniversality and the criteria.

Given a T-monoid (X, alpha) and the test algebra (V, q), ``W = [X, V]`` is
the set of homomorphisms into ``L(V)`` ordered pointwise, and

    conv(f) = meet{ g in W | h(f, x) <= g(x) for all x },
    h(f, x) = q(T ev(kappa(f, alpha(x)))).

X is exponentiable iff (W, conv) is a T-algebra.  Three independent routes
decide this here: the per-monad lattice criteria, the algebra laws of conv,
and a couniversal search that never looks at conv (see
:func:`couniversal_search`).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Iterable, Sequence

from .algebra import Algebra, L, check_algebra, test_algebra
from .errors import CapExceeded, HypothesisUnmet, NoClosedForm, NotExponentiable
from .instances import Monad, UpFamily
from .kleisli import (HomSet, KleisliMonoid, box_product, check_monoid, enumerate_monoids,
                      final_structure, hom_set, initial_structure, is_hom, unit_monoid)
from .order import FinMap, FinOrder, FinSet, is_distributive, product_set
from .report import CAP, FAIL, PASS, UNMET, CheckReport, jsonable
from .surface import opens_of


class ConvMap:
    """The map ``conv: T[X, V] -> [X, V]``, evaluated lazily and memoized."""

    def __init__(self, x: KleisliMonoid, v: Algebra | None = None):
        self.source = x
        self.monad = x.monad
        self.value = v or test_algebra(x.monad)
        self.Vmon = L(self.value)
        self.homset: HomSet = hom_set(x, self.Vmon)
        self.W = self.homset.carrier
        self.order: FinOrder = self.homset.order
        vord = self.value.order
        self._vmeet = lambda vals: vord.meet(vals)
        self._vleq = vord.leq
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"ConvMap({self.source!r}, |W|={len(self.W)})"

    def h(self, f, x) -> str:
        """``q . T ev . kappa(f, alpha(x))``."""
        m = self.monad
        return self.value(m.fmap(lambda p: p[0](p[1]), m.kappa(f, self.source.alpha[x])))

    def __call__(self, f) -> FinMap:
        hit = self._cache.get(f)
        if hit is not None:
            return hit
        X = self.source.carrier
        bounds = {x: self.h(f, x) for x in X}
        above = [g for g in self.W if all(self._vleq(bounds[x], g(x)) for x in X)]
        meet = FinMap(X, self.value.carrier,
                      [self._vmeet([g(x) for g in above]) for x in X], check=False)
        # meets of homomorphisms are homomorphisms, so the meet lies in W
        assert meet in self.W, "meet of homomorphisms is not a homomorphism"
        self._cache[f] = meet
        return meet

    def table(self) -> dict:
        """conv on all of T[X, V]; CapExceeded if that set is too large."""
        return {t: self(t) for t in self.monad.T_obj(self.W)}

    def algebra(self) -> Algebra:
        return Algebra(self.monad, self.W, self, name="conv")


def conv(x: KleisliMonoid, v: Algebra | None = None) -> ConvMap:
    return ConvMap(x, v)


class ClosedConv:
    """A closed-form conv on the same W as a :class:`ConvMap`."""

    def __init__(self, c: ConvMap, formula: str, fn):
        self.base = c
        self.formula = formula
        self._fn = fn
        self.W = c.W

    def __call__(self, f) -> FinMap:
        return self._fn(f)


def _wmap(c: ConvMap, values: Iterable) -> FinMap:
    return FinMap(c.source.carrier, c.value.carrier, list(values), check=False)


def conv_closed_form(x: KleisliMonoid | ConvMap, v: Algebra | None = None) -> ClosedConv:
    """Closed forms: P union, F meet-of-joins, PV tensor weighted join, PV cartesian psi-tilde."""
    c = x if isinstance(x, ConvMap) else ConvMap(x, v)
    m = c.monad
    X = c.source.carrier
    vord = c.value.order
    if m.kind == "P":
        return ClosedConv(c, "union", lambda A: _wmap(c, (vord.join([g(x) for g in A]) for x in X)))
    if m.kind == "F":
        def wjoin(S):
            # least element of W above every member of S
            ups = [w for w in c.W if all(c.order.leq(s, w) for s in S)]
            return next(u for u in ups if all(c.order.leq(u, w) for w in ups))

        def wmeet(S):
            lows = [w for w in c.W if all(c.order.leq(w, s) for s in S)]
            return next(u for u in lows if all(c.order.leq(w, u) for w in lows))

        def meet_of_joins(F):
            members = [A for A in c.W.subsets() if F.gen <= A]
            return wmeet([wjoin(A) for A in members])
        return ClosedConv(c, "meet-of-joins", meet_of_joins)
    if m.kind == "PV":
        q = m.quantale
        if m.kappa_flavor == "tensor":
            return ClosedConv(c, "weighted-join", lambda phi: _wmap(
                c, (q.join(q.tensor(w, g(x)) for g, w in phi.items()) for x in X)))
        if not q.unit_is_top:
            raise NoClosedForm("the cartesian closed form needs the unit to be top")
        alpha = c.source.alpha

        def psi_tilde(psi):
            return _wmap(c, (q.join(q.tensor(q.meet2(w, alpha[y](z)), g(z))
                                    for g, w in psi.items() for z in X) for y in X))
        return ClosedConv(c, "psi-tilde", psi_tilde)
    raise NoClosedForm(f"no closed form of conv for {m.label}")


def compare_conv(c: ConvMap, closed: ClosedConv, elements: Iterable | None = None) -> CheckReport:
    """Generic conv against a closed form on all of T[X,V] (or the given elements)."""
    rep = CheckReport(f"conv vs {closed.formula}")
    items = (lambda: iter(elements)) if elements is not None else (lambda: iter(c.monad.T_obj(c.W)))
    from .monad import _scan
    _scan(rep, "agree", items, lambda t: c(t) == closed(t))
    return rep


def default_algebra_mode(c: ConvMap) -> str:
    m = c.monad
    return "exhaustive" if m.fits(len(c.W), 2, m.caps.ttx) else "characterization"


def conv_is_algebra(c: ConvMap, mode: str = "auto", seed: int = 0) -> CheckReport:
    """The T-algebra laws of ``(W, conv)``."""
    if mode == "auto":
        mode = default_algebra_mode(c)
    rep = check_algebra(c.algebra(), mode, seed=seed)
    rep.name = "conv is an algebra"
    return rep


def nbhd_structure(c: ConvMap) -> KleisliMonoid:
    """``(W, conv*)``; verifies ``conv . conv* = 1`` and the monoid laws."""
    alg = c.algebra()
    n = L(alg)
    for g in c.W:
        assert c(n.alpha[g]) == g, "conv . conv* != 1"
    rep = check_monoid(n, mu_star=False)
    assert rep.ok, rep.summary()
    n.name = "nbhd"
    return n.with_order(c.order)


# --- couniversality ----------------------------------------------------------

def curry(g: FinMap, Z: FinSet, X: FinSet, W: FinSet) -> dict:
    """``z -> g(z, -)``; the values are maps X -> V that may or may not lie in W."""
    return {z: FinMap(X, g.codomain, [g((z, x)) for x in X], check=False) for z in Z}


def check_couniversal(x: KleisliMonoid, target: KleisliMonoid, expo: KleisliMonoid,
                      tests: Sequence[KleisliMonoid]) -> CheckReport:
    """ev: expo box X -> target is a hom, and every hom g: Z box X -> target curries
    to a unique map Z -> expo, which is a homomorphism."""
    rep = CheckReport("couniversal", stats={"tests": len(tests), "points": len(expo.carrier)})
    W = expo.carrier
    X = x.carrier
    Wset = set(W.elements)
    by_values = Counter(w.values for w in W if w.domain == X)
    ev_src = box_product(expo, x)
    ev = FinMap(ev_src.carrier, target.carrier, [g(p) for g, p in ev_src.carrier], check=False)
    v = is_hom(ev, ev_src, target)
    rep.law("ev-hom", len(ev_src.carrier), None if v else {"point": v.witness["x"]})
    homs = 0
    lands = hom_ok = unique_ok = None
    for zi, Z in enumerate(tests):
        try:
            gs = hom_set(box_product(Z, x), target)
        except CapExceeded as exc:
            rep.cap(f"test {zi}", exc)
            continue
        for g in gs.maps:
            homs += 1
            f = curry(g, Z.carrier, X, W)
            outside = next((z for z in Z.carrier if f[z] not in Wset), None)
            if outside is not None and lands is None:
                lands = {"test": zi, "g": g, "z": outside}
                continue
            fmap = FinMap(Z.carrier, W, f, check=False)
            hv = is_hom(fmap, Z, expo)
            if not hv and hom_ok is None:
                hom_ok = {"test": zi, "g": g, "z": hv.witness["x"]}
            for z in Z.carrier:
                matches = by_values.get(f[z].values, 0)
                if matches != 1 and unique_ok is None:
                    unique_ok = {"test": zi, "g": g, "z": z, "matches": matches}
    rep.law("curry-lands", homs, lands)
    rep.law("curry-hom", homs, hom_ok)
    rep.law("curry-unique", homs, unique_ok)
    rep.stats["homs"] = homs
    return rep


def fork_monoids(m: Monad) -> list[KleisliMonoid]:
    """Three-point U-monoids ``z0 -> up{{z0,z1},{z0,z2}}``, others discrete."""
    if m.kind != "U":
        return []
    Z = FinSet(["z0", "z1", "z2"])
    alpha = {"z0": UpFamily([{"z0", "z1"}, {"z0", "z2"}]),
             "z1": m.unit("z1"), "z2": m.unit("z2")}
    return [KleisliMonoid(m, Z, alpha, name="fork")]


def default_tests(m: Monad, max_points: int = 2) -> list[KleisliMonoid]:
    """All monoids on 1..max_points points, plus the U forks."""
    tests: list[KleisliMonoid] = []
    for n in range(1, max_points + 1):
        tests.extend(enumerate_monoids(m, FinSet([f"z{i}" for i in range(n)])))
    return tests + fork_monoids(m)


def couniversal_search(x: KleisliMonoid, v: Algebra | None = None,
                       tests: Sequence[KleisliMonoid] | None = None) -> tuple[KleisliMonoid, CheckReport]:
    """Search for a couniversal structure on W without using conv.

    The candidate is the smallest structure on W making every curry of every
    hom ``Z box X -> V`` (Z in ``tests``) a homomorphism.  Enlarging a
    structure only makes ev harder to be a hom, so when ev fails here no
    structure on W is couniversal for these tests.
    """
    m = x.monad
    v = v or test_algebra(m)
    Vmon = L(v)
    hs = hom_set(x, Vmon)
    W = hs.carrier
    tests = list(tests) if tests is not None else default_tests(m)
    cocone = []
    for Z in tests:
        for g in hom_set(box_product(Z, x), Vmon).maps:
            f = curry(g, Z.carrier, x.carrier, W)
            cocone.append((FinMap(Z.carrier, W, f, check=False), Z))
    cand = final_structure(m, W, cocone).with_order(hs.order)
    cand.name = "searched"
    rep = check_couniversal(x, Vmon, cand, tests)
    rep.stats["cocone"] = len(cocone)
    return cand, rep


# --- criteria ----------------------------------------------------------------

@dataclass
class ExpoVerdict:
    """Outcome of one route (or of all routes) deciding exponentiability."""

    exponentiable: bool | None
    route: str
    witness: Any = None
    counts: dict = field(default_factory=dict)
    decisive: bool = True
    status: str = PASS
    routes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = {"exponentiable": self.exponentiable, "route": self.route,
             "witness": jsonable(self.witness), "counts": jsonable(self.counts),
             "decisive": self.decisive, "status": self.status}
        if self.routes:
            d["routes"] = {k: r.to_json() for k, r in self.routes.items()}
        return d


def dagger_scan(x: KleisliMonoid) -> dict:
    """All (u, v, x, z) violating ``join_y (u^a(x)(y)) (x) (v^a(y)(z)) >= (u (x) v) ^ a(x)(z)``."""
    q = x.monad.quantale
    a = x.alpha
    X = x.carrier
    fails = []
    checked = 0
    for u, v, p, r in product(q.carrier, q.carrier, X, X):
        checked += len(X)
        trace = {y: q.tensor(q.meet2(u, a[p](y)), q.meet2(v, a[y](r))) for y in X}
        lhs = q.join(trace.values())
        rhs = q.meet2(q.tensor(u, v), a[p](r))
        if not q.leq(rhs, lhs):
            best = next(y for y in X if trace[y] == lhs)
            fails.append({"u": u, "v": v, "x": p, "z": r, "lhs": lhs, "rhs": rhs,
                          "best_y": best, "trace": trace})
    return {"failures": fails, "checked": checked}


def criterion(x: KleisliMonoid) -> ExpoVerdict:
    """Lattice-theoretic exponentiability criteria for finite carriers.

    P and F: always (finite lattices are continuous).  U: the lattice of opens
    is distributive.  PV tensor: always.  PV cartesian: the inequality of
    :func:`dagger_scan`, only for a frame with unit top.
    """
    m = x.monad
    if m.kind == "P":
        return ExpoVerdict(True, "criterion", counts={"reason": "every preorder"})
    if m.kind == "F":
        opens, _ = opens_of(x)
        return ExpoVerdict(True, "criterion",
                           counts={"opens": len(opens), "reason": "finite lattices are continuous"})
    if m.kind == "U":
        opens, lat = opens_of(x)
        d = is_distributive(lat)
        wit = None if d else {"triple": [x.carrier.sort(o) for o in d.witness]}
        return ExpoVerdict(bool(d), "criterion", wit, {"opens": len(opens)})
    q = m.quantale
    if m.kappa_flavor == "tensor":
        return ExpoVerdict(True, "criterion", counts={"reason": "tensor structure is closed"})
    if not (q.frame and q.unit_is_top):
        raise HypothesisUnmet("cartesian criterion needs a frame with unit = top")
    scan = dagger_scan(x)
    fails = scan["failures"]
    wit = None
    if fails:
        f0 = fails[0]
        wit = {k: f0[k] for k in ("u", "v", "x", "z", "lhs", "rhs", "best_y", "trace")}
        wit["all"] = [[f["u"], f["v"], f["x"], f["z"]] for f in fails]
    return ExpoVerdict(not fails, "criterion", wit,
                       {"checked": scan["checked"], "failures": len(fails)})


def _conv_route(x: KleisliMonoid, mode: str, seed: int) -> ExpoVerdict:
    c = conv(x)
    rep = conv_is_algebra(c, mode, seed)
    scope = rep.stats.get("scope", "complete")
    decisive = rep.verdict == FAIL or scope == "complete" or rep.stats.get("mode") == "exhaustive"
    if rep.verdict == CAP:
        return ExpoVerdict(None, "conv-laws", rep.witness, {"W": len(c.W)}, False, CAP)
    return ExpoVerdict(rep.ok, "conv-laws", rep.witness,
                       {"W": len(c.W), "mode": rep.stats.get("mode"), "scope": scope},
                       decisive)


def _couniversal_route(x: KleisliMonoid, tests) -> ExpoVerdict:
    cand, rep = couniversal_search(x, tests=tests)
    if rep.verdict == CAP:
        return ExpoVerdict(None, "couniversal", rep.witness, {}, False, CAP)
    counts = {"W": len(cand.carrier), "tests": rep.stats["tests"], "homs": rep.stats["homs"]}
    # failure is certified for the given tests; success is only relative to them
    return ExpoVerdict(rep.ok, "couniversal", rep.witness, counts, decisive=not rep.ok)


ROUTES = ("criterion", "conv-laws", "couniversal")


def decide(x: KleisliMonoid, route: str = "all", tests: Sequence[KleisliMonoid] | None = None,
           mode: str = "auto", seed: int = 0) -> ExpoVerdict:
    """Run one route or all of them; with ``all`` the decisive routes must agree."""
    if route != "all":
        if route == "criterion":
            return criterion(x)
        if route == "conv-laws":
            return _conv_route(x, mode, seed)
        if route == "couniversal":
            return _couniversal_route(x, tests)
        raise ValueError(f"unknown route {route!r}")
    results: dict = {}
    for r in ROUTES:
        try:
            results[r] = decide(x, r, tests, mode, seed)
        except HypothesisUnmet as exc:
            results[r] = ExpoVerdict(None, r, str(exc), decisive=False, status=UNMET)
        except CapExceeded as exc:
            results[r] = ExpoVerdict(None, r, str(exc), decisive=False, status=CAP)
    decided = {k: r.exponentiable for k, r in results.items()
               if r.decisive and r.exponentiable is not None}
    agree = len(set(decided.values())) <= 1
    first = next((results[k] for k in ROUTES if k in decided), None)
    out = ExpoVerdict(first.exponentiable if first else None, "all",
                      first.witness if first else None,
                      {"decided_by": sorted(decided), "agree": agree},
                      decisive=bool(decided), routes=results,
                      status=PASS if agree else FAIL)
    if not agree:
        out.witness = {k: r.exponentiable for k, r in results.items()}
    return out


# --- exponentials ------------------------------------------------------------

def exponential(x: KleisliMonoid, y: KleisliMonoid, v: Algebra | None = None,
                tests: Sequence[KleisliMonoid] | None = None) -> KleisliMonoid:
    """``[X, Y]`` with the initial structure along all ``[X, f]: [X,Y] -> [X,V]``, f in [Y,V]."""
    verdict = criterion(x)
    if not verdict.exponentiable:
        raise NotExponentiable("criterion fails", verdict.witness)
    m = x.monad
    c = conv(x, v)
    nb = nbhd_structure(c)
    XY = hom_set(x, y)
    YV = hom_set(y, c.Vmon)
    cone = []
    for f in YV.maps:
        post = FinMap(XY.carrier, c.W, [f.compose(h) for h in XY.maps], check=False)
        cone.append((post, nb))
    omega = initial_structure(m, XY.carrier, cone)
    omega.name = "exponential"
    omega = omega.with_order(XY.order)
    rep = check_monoid(omega, mu_star=False)
    assert rep.ok, rep.summary()
    if tests is not None:
        crep = check_couniversal(x, y, omega, tests)
        assert crep.ok, crep.summary()
    return omega


def adjunction_count(z: KleisliMonoid, x: KleisliMonoid, y: KleisliMonoid,
                     expo: KleisliMonoid) -> CheckReport:
    """``|[Z box X, Y]| = |[Z, [X,Y]]|`` with currying a verified bijection."""
    rep = CheckReport("adjunction")
    left = hom_set(box_product(z, x), y)
    right = hom_set(z, expo)
    right_set = set(right.maps)
    W = expo.carrier
    curried = []
    bad = None
    for g in left.maps:
        f = curry(g, z.carrier, x.carrier, W)
        if any(f[p] not in set(W.elements) for p in z.carrier):
            bad = bad or {"g": g, "reason": "curry leaves [X,Y]"}
            continue
        fm = FinMap(z.carrier, W, f, check=False)
        if fm not in right_set:
            bad = bad or {"g": g, "reason": "curry is not a hom"}
        curried.append(fm)
    rep.law("curry-into-homs", len(left.maps), bad)
    rep.law("counts-equal", 1, None if len(left.maps) == len(right.maps)
            else {"left": len(left.maps), "right": len(right.maps)})
    rep.law("bijective", len(curried), None if len(set(curried)) == len(curried) == len(right.maps)
            else {"distinct": len(set(curried))})
    rep.stats.update(left=len(left.maps), right=len(right.maps))
    return rep


def hom_presentations(c: ConvMap) -> list[dict]:
    """For F/U: each element of [X, 2] as a closed set (1-preimage) and an open set (0-preimage)."""
    X = c.source.carrier
    top = c.value.order.top()
    return [{"map": g, "closed": X.sort(x for x in X if g(x) == top),
             "open": X.sort(x for x in X if g(x) != top)} for g in c.W]


def E_hom_iso(x: KleisliMonoid) -> bool:
    """``[E, X]`` has exactly the points of X (evaluation at * is bijective)."""
    E = unit_monoid(x.monad)
    hs = hom_set(E, x)
    return sorted(map(repr, (f("*") for f in hs.maps))) == sorted(map(repr, x.carrier))
