"""The four concrete powerset-enriched monads and their element types.

Elements of TX never need X itself: subsets are frozensets, filters are
represented by their principal generator, up-families by their antichain of
minimal generators, and V-valued functions sparsely by their non-bottom
values.  This lets TT- and TTT-elements be built over carriers that are too
large to enumerate.
"""

from __future__ import annotations

import math
import random
from functools import reduce
from itertools import combinations, product
from typing import Callable, Iterable, Iterator, Sequence

from .errors import HypothesisUnmet, MalformedSurface
from .order import FinMap, FinSet
from .quantale import Quantale
from .report import Caps, jsonable

# number of antichains in the boolean lattice P(n), i.e. |UX| for |X| = n
DEDEKIND = (2, 3, 6, 20, 168, 7581, 7828354, 2414682040998, 56130437228687557907788)


def minimal_sets(sets: Iterable[frozenset]) -> frozenset:
    """The antichain of inclusion-minimal members."""
    kept: list[frozenset] = []
    for s in sorted(set(sets), key=len):
        if not any(k <= s for k in kept):
            kept.append(s)
    return frozenset(kept)


class Filter:
    """The principal filter ``{B | gen <= B}``; ``gen`` may be empty (improper filter)."""

    __slots__ = ("gen", "_hash")

    def __init__(self, gen: Iterable):
        self.gen = frozenset(gen)
        self._hash = hash(("F", self.gen))

    def __contains__(self, subset) -> bool:
        return self.gen <= subset

    def __eq__(self, other) -> bool:
        return isinstance(other, Filter) and self.gen == other.gen

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Filter(up {set(self.gen) or '{}'})"

    def to_json(self):
        return {"up": jsonable(self.gen)}


class UpFamily:
    """An up-closed family of subsets, stored as its minimal generators."""

    __slots__ = ("gens", "_hash")

    def __init__(self, gens: Iterable[Iterable], minimal: bool = False):
        gens = frozenset(frozenset(g) for g in gens)
        self.gens = gens if minimal else minimal_sets(gens)
        self._hash = hash(("U", self.gens))

    def __contains__(self, subset) -> bool:
        return any(g <= subset for g in self.gens)

    def __eq__(self, other) -> bool:
        return isinstance(other, UpFamily) and self.gens == other.gens

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(sorted(str(set(g) or "{}") for g in self.gens))
        return f"UpFamily(up[{inner}])"

    def members(self, X: FinSet) -> Iterator[frozenset]:
        for S in X.subsets():
            if S in self:
                yield S

    def to_json(self):
        return {"gens": jsonable(self.gens)}


class VFun:
    """A V-valued function, storing only its non-bottom values."""

    __slots__ = ("_map", "bottom", "_hash")

    def __init__(self, mapping: dict, bottom: str):
        self._map = {x: v for x, v in mapping.items() if v != bottom}
        self.bottom = bottom
        self._hash = hash(frozenset(self._map.items()))

    def __call__(self, x) -> str:
        return self._map.get(x, self.bottom)

    def items(self):
        return self._map.items()

    @property
    def support(self) -> frozenset:
        return frozenset(self._map)

    def __eq__(self, other) -> bool:
        return isinstance(other, VFun) and self._map == other._map

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"VFun({self._map!r})"

    def to_json(self):
        return {"values": sorted(([jsonable(x), v] for x, v in self._map.items()),
                                 key=lambda p: repr(p))}


def _bounded_subsets(pool: Sequence, max_size: int | None) -> Iterator[frozenset]:
    top = len(pool) if max_size is None else min(max_size, len(pool))
    for k in range(top + 1):
        for c in combinations(pool, k):
            yield frozenset(c)


class Monad:
    """Common interface of a lax monoidal powerset-enriched monad ``(T, tau, kappa)``.

    Subclasses implement the element-level operations; ``T_obj`` enumerates
    TX under the instance caps.  All maps passed to ``fmap`` / ``T_map`` may be
    any callable (a FinMap, a dict's ``__getitem__``, ...).
    """

    kind = "?"
    quantale: Quantale | None = None
    kappa_flavor: str | None = None

    def __init__(self, caps: Caps | None = None):
        self.caps = caps or Caps.from_env()

    def __eq__(self, other) -> bool:
        return (isinstance(other, Monad) and self.kind == other.kind
                and self.quantale == other.quantale and self.kappa_flavor == other.kappa_flavor)

    def __hash__(self) -> int:
        return hash((self.kind, self.kappa_flavor))

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"

    @property
    def label(self) -> str:
        return self.kind

    # --- objects -----------------------------------------------------------
    def size(self, n: int) -> float:
        raise NotImplementedError

    def _enumerate(self, X: FinSet) -> Iterator:
        raise NotImplementedError

    def support(self, t) -> frozenset:
        """The points ``t`` refers to; ``Tf(t)`` depends only on f restricted to them."""
        if isinstance(t, Filter):
            return t.gen
        if isinstance(t, UpFamily):
            return frozenset().union(*t.gens)
        if isinstance(t, VFun):
            return t.support
        return frozenset(t)

    def fits(self, n: int, depth: int, cap: int) -> bool:
        """Whether ``|T^depth X| <= cap`` for ``|X| = n``, without building huge numbers.

        Every size satisfies ``size(k) >= k``, so an intermediate level above the
        cap decides the answer.
        """
        for _ in range(depth):
            n = self.size(n)
            if n > cap:
                return False
        return True

    def T_obj(self, X: FinSet, cap: str = "tx") -> FinSet:
        """All of TX in deterministic order; CapExceeded above the cap."""
        self.caps.check(f"|T{self.kind}X| for |X|={len(X)}", self.size(len(X)), cap)
        return FinSet(self._enumerate(X))

    def T_map(self, f: Callable) -> Callable:
        return lambda t: self.fmap(f, t)

    # --- structure ---------------------------------------------------------
    def fmap(self, f: Callable, t):
        raise NotImplementedError

    def unit(self, x):
        raise NotImplementedError

    def mult(self, tt):
        raise NotImplementedError

    def tau(self, subset: frozenset):
        raise NotImplementedError

    def kappa(self, a, b):
        raise NotImplementedError

    def leq(self, a, b) -> bool:
        """The refinement order induced by ``mult . tau`` (closed form)."""
        raise NotImplementedError

    def join(self, ts: Iterable):
        """Join in TX; by definition ``mult(tau(S))``."""
        return self.mult(self.tau(frozenset(ts)))

    def meet(self, ts: Iterable, X: FinSet):
        raise NotImplementedError

    def top(self, X: FinSet):
        return self.meet([], X)

    def bottom(self):
        return self.join([])

    def fmap_adjoint(self, f: FinMap, t):
        """Closed form of the right adjoint ``(Tf)*`` at ``t``."""
        raise NotImplementedError

    def mult_adjoint(self, t, X: FinSet):
        """Closed form of ``mu_X*`` at ``t``, an element of TTX."""
        raise NotImplementedError

    def is_element(self, t, X: FinSet) -> bool:
        raise NotImplementedError

    # --- witnesses ---------------------------------------------------------
    def generated(self, pool: Sequence, tier: str) -> Iterator:
        """Small elements of T(pool-carrier) built from ``pool``; tier "A" richer than "B"."""
        raise NotImplementedError

    def generated_count(self, p: int, tier: str) -> float:
        raise NotImplementedError

    # --- encoding ----------------------------------------------------------
    def encode(self, t):
        return jsonable(t)

    def decode(self, obj, X: FinSet):
        raise NotImplementedError


class PowersetMonad(Monad):
    """``P`` with union, singletons, ``tau = id`` and ``kappa(A, B) = A x B``."""

    kind = "P"

    def size(self, n):
        return 2 ** n

    def _enumerate(self, X):
        return X.subsets()

    def fmap(self, f, A):
        return frozenset(f(a) for a in A)

    def unit(self, x):
        return frozenset((x,))

    def mult(self, AA):
        return frozenset().union(*AA)

    def tau(self, subset):
        return frozenset(subset)

    def kappa(self, A, B):
        return frozenset(product(A, B))

    def leq(self, A, B):
        return A <= B

    def join(self, ts):
        return frozenset().union(*ts)

    def meet(self, ts, X):
        ts = list(ts)
        return frozenset(X.elements).intersection(*ts) if ts else frozenset(X.elements)

    def fmap_adjoint(self, f, B):
        return f.preimage(B)

    def mult_adjoint(self, A, X=None):
        return frozenset(FinSet(sorted(A, key=repr)).subsets())

    def is_element(self, t, X):
        return isinstance(t, frozenset) and t <= frozenset(X.elements)

    def generated(self, pool, tier):
        limit = None if (tier == "A" and len(pool) <= 12) else (2 if tier == "A" else 1)
        return _bounded_subsets(pool, limit)

    def generated_count(self, p, tier):
        if tier == "A" and p <= 12:
            return 2 ** p
        k = 2 if tier == "A" else 1
        return sum(math.comb(p, i) for i in range(k + 1))

    def decode(self, obj, X):
        return frozenset(_decode_subset(obj, X))


class FilterMonad(Monad):
    """The filter monad on finite sets, via principal generators.

    Every filter on a finite set is principal, so ``FX`` is in bijection with
    ``PX``; the improper filter (generator ``{}``) is included.
    """

    kind = "F"

    def size(self, n):
        return 2 ** n

    def _enumerate(self, X):
        return (Filter(A) for A in X.subsets())

    def fmap(self, f, F):
        return Filter(f(a) for a in F.gen)

    def unit(self, x):
        return Filter((x,))

    def mult(self, FF):
        return Filter(frozenset().union(*(F.gen for F in FF.gen)))

    def tau(self, subset):
        return Filter(subset)

    def kappa(self, a, b):
        return Filter(product(a.gen, b.gen))

    def leq(self, a, b):
        # reverse inclusion of filters = inclusion of generators
        return a.gen <= b.gen

    def join(self, ts):
        return Filter(frozenset().union(*(t.gen for t in ts)))

    def meet(self, ts, X):
        gens = [t.gen for t in ts]
        return Filter(frozenset(X.elements).intersection(*gens) if gens else X.elements)

    def fmap_adjoint(self, f, F):
        return Filter(f.preimage(F.gen))

    def mult_adjoint(self, F, X=None):
        return Filter(Filter(B) for B in FinSet(sorted(F.gen, key=repr)).subsets())

    def is_element(self, t, X):
        return isinstance(t, Filter) and t.gen <= frozenset(X.elements)

    def generated(self, pool, tier):
        return (Filter(A) for A in PowersetMonad.generated(self, pool, tier))

    def generated_count(self, p, tier):
        return PowersetMonad.generated_count(self, p, tier)

    def decode(self, obj, X):
        if isinstance(obj, dict) and set(obj) == {"up"}:
            obj = obj["up"]
        return Filter(_decode_subset(obj, X))


class UpSetMonad(Monad):
    """The up-set monad: ``UX`` = up-closed families of subsets of X."""

    kind = "U"

    def size(self, n):
        # beyond the table a lower bound: antichains inside the middle layer,
        # or (cheaper for large n) families of singletons
        if n < len(DEDEKIND):
            return DEDEKIND[n]
        return 2 ** math.comb(n, n // 2) if n <= 64 else 2 ** n

    def _enumerate(self, X):
        subsets = list(X.subsets())
        out: list[UpFamily] = []

        def rec(i: int, chosen: list) -> None:
            if i == len(subsets):
                out.append(UpFamily(chosen, minimal=True))
                return
            rec(i + 1, chosen)
            s = subsets[i]
            if all(not (c <= s or s <= c) for c in chosen):
                rec(i + 1, chosen + [s])

        rec(0, [])
        return iter(out)

    def fmap(self, f, u):
        return UpFamily(frozenset(f(a) for a in g) for g in u.gens)

    def unit(self, x):
        return UpFamily((frozenset((x,)),), minimal=True)

    def mult(self, uu):
        # A in mu(uu) iff some generator G of uu has A in every member of G
        gens: list[frozenset] = []
        for G in uu.gens:
            gens.extend(self._intersection(G).gens)
        return UpFamily(gens)

    @staticmethod
    def _intersection(families: Iterable[UpFamily]) -> UpFamily:
        acc = (frozenset(),)
        for fam in families:
            acc = minimal_sets(a | b for a in acc for b in fam.gens)
            if not acc:
                break
        return UpFamily(acc, minimal=True)

    def tau(self, subset):
        return UpFamily((frozenset(subset),), minimal=True)

    def kappa(self, u, v):
        return UpFamily(frozenset(product(A, B)) for A in u.gens for B in v.gens)

    def leq(self, u, v):
        # reverse inclusion: every member of v is a member of u
        return all(any(a <= b for a in u.gens) for b in v.gens)

    def join(self, ts):
        return self._intersection(ts)

    def meet(self, ts, X=None):
        return UpFamily(g for t in ts for g in t.gens)

    def top(self, X=None):
        return UpFamily((), minimal=True)

    def bottom(self):
        return UpFamily((frozenset(),), minimal=True)

    def fmap_adjoint(self, f, v):
        return UpFamily(f.preimage(B) for B in v.gens)

    def mult_adjoint(self, u, X):
        UX = self.T_obj(X)
        return UpFamily(frozenset(y for y in UX if A in y) for A in u.gens)

    def is_element(self, t, X):
        return isinstance(t, UpFamily) and all(g <= frozenset(X.elements) for g in t.gens)

    def _gen_limit(self, p, tier):
        if tier == "A":
            return None if 2 ** p <= 64 else 2
        return 2

    def generated(self, pool, tier):
        """Up-families with at most two generators.

        Tier "A": up to two generators, each any subset of a pool of at most 6
        elements, else of size at most 2.  Tier "B": one generator of size at
        most 2, or two singleton generators.
        """
        seen = set()
        subs = list(_bounded_subsets(pool, self._gen_limit(len(pool), tier)))

        def emit(gens):
            u = UpFamily(gens)
            if u not in seen:
                seen.add(u)
                return u
            return None

        for g in [()] + [(s,) for s in subs]:
            u = emit(g)
            if u is not None:
                yield u
        # small generator pairs first, so truncated pools keep the simplest families
        pairs = sorted(combinations(subs, 2), key=lambda ab: len(ab[0]) + len(ab[1])) \
            if tier == "A" else combinations([frozenset((a,)) for a in pool], 2)
        for a, b in pairs:
            u = emit((a, b))
            if u is not None:
                yield u

    def generated_count(self, p, tier):
        s = 2 ** p if self._gen_limit(p, tier) is None else sum(math.comb(p, i) for i in range(3))
        if tier == "A":
            return 1 + s + math.comb(s, 2)
        return 1 + s + math.comb(p, 2)

    def decode(self, obj, X):
        if isinstance(obj, dict) and set(obj) == {"gens"}:
            obj = obj["gens"]
        return UpFamily(_decode_subset(g, X) for g in obj)


class VPowersetMonad(Monad):
    """The V-powerset monad ``P_V`` for a finite quantale V.

    ``kappa_flavor`` is "tensor" (pointwise tensor, needs a commutative V) or
    "cartesian" (pointwise meet, needs a frame).
    """

    kind = "PV"

    def __init__(self, quantale: Quantale, kappa_flavor: str = "tensor", caps: Caps | None = None):
        super().__init__(caps)
        if kappa_flavor not in ("tensor", "cartesian"):
            raise MalformedSurface(f"unknown kappa flavor {kappa_flavor!r}")
        if kappa_flavor == "tensor" and not quantale.commutative:
            raise HypothesisUnmet("tensor kappa requires a commutative quantale")
        if kappa_flavor == "cartesian" and not quantale.frame:
            raise HypothesisUnmet("cartesian kappa requires a frame")
        self.quantale = quantale
        self.kappa_flavor = kappa_flavor

    def __repr__(self):
        return f"VPowersetMonad({self.quantale.name}, {self.kappa_flavor})"

    @property
    def label(self) -> str:
        return f"PV[{self.quantale.name},{self.kappa_flavor}]"

    def vfun(self, mapping: dict) -> VFun:
        return VFun(mapping, self.quantale.bottom)

    def size(self, n):
        return len(self.quantale.carrier) ** n

    def _enumerate(self, X):
        for vals in product(self.quantale.carrier.elements, repeat=len(X)):
            yield self.vfun(dict(zip(X.elements, vals)))

    def fmap(self, f, phi):
        q = self.quantale
        acc: dict = {}
        for x, v in phi.items():
            y = f(x)
            acc[y] = q.join2(acc[y], v) if y in acc else v
        return self.vfun(acc)

    def unit(self, x):
        return self.vfun({x: self.quantale.unit})

    def mult(self, Phi):
        q = self.quantale
        acc: dict = {}
        for phi, w in Phi.items():
            for y, v in phi.items():
                t = q.tensor(w, v)
                acc[y] = q.join2(acc[y], t) if y in acc else t
        return self.vfun(acc)

    def tau(self, subset):
        k = self.quantale.unit
        return self.vfun({a: k for a in subset})

    def kappa(self, phi, psi):
        q = self.quantale
        op = q.tensor if self.kappa_flavor == "tensor" else q.meet2
        return self.vfun({(x, y): op(u, v) for x, u in phi.items() for y, v in psi.items()})

    def leq(self, phi, psi):
        q = self.quantale
        return all(q.leq(v, psi(x)) for x, v in phi.items())

    def join(self, ts):
        q = self.quantale
        acc: dict = {}
        for t in ts:
            for x, v in t.items():
                acc[x] = q.join2(acc[x], v) if x in acc else v
        return self.vfun(acc)

    def meet(self, ts, X):
        q = self.quantale
        ts = list(ts)
        return self.vfun({x: q.meet(t(x) for t in ts) for x in X})

    def fmap_adjoint(self, f, psi):
        return self.vfun({x: psi(f(x)) for x in f.domain})

    def mult_adjoint(self, phi, X):
        q = self.quantale
        out = {}
        for psi in self.T_obj(X):
            out[psi] = q.meet(q.right_residual(psi(y), phi(y)) for y in X)
        return self.vfun(out)

    def is_element(self, t, X):
        return (isinstance(t, VFun) and t.support <= frozenset(X.elements)
                and all(v in self.quantale.carrier for _, v in t.items()))

    def generated(self, pool, tier):
        """Functions supported on at most two pool elements.

        Tier "A" uses every non-bottom value; tier "B" uses the top value on
        two-point supports.
        """
        q = self.quantale
        vals = [v for v in q.carrier if v != q.bottom]
        yield self.vfun({})
        for a in pool:
            for v in vals:
                yield self.vfun({a: v})
        vals2 = vals if tier == "A" else [q.top]
        for a, b in combinations(pool, 2):
            for u in vals2:
                for v in vals2:
                    yield self.vfun({a: u, b: v})

    def generated_count(self, p, tier):
        k = len(self.quantale.carrier) - 1
        k2 = k if tier == "A" else 1
        return 1 + p * k + math.comb(p, 2) * k2 * k2

    def decode(self, obj, X):
        if isinstance(obj, dict) and set(obj) == {"values"}:
            obj = {(_decode_elem(k, X)): v for k, v in obj["values"]}
        elif isinstance(obj, dict):
            obj = {_decode_elem(k, X): v for k, v in obj.items()}
        for v in obj.values():
            if v not in self.quantale.carrier:
                raise MalformedSurface(f"value {v!r} is not in the quantale")
        return self.vfun(obj)


def _decode_elem(obj, X: FinSet):
    if obj in X:
        return obj
    if isinstance(obj, list):
        t = tuple(_decode_elem(o, X) if not isinstance(o, list) else tuple(o) for o in obj)
        if t in X:
            return t
    raise MalformedSurface(f"unknown element {obj!r}")


def _decode_subset(obj, X: FinSet) -> frozenset:
    if not isinstance(obj, (list, tuple)):
        raise MalformedSurface(f"expected a subset list, got {obj!r}")
    return frozenset(_decode_elem(o, X) for o in obj)


def make_monad(kind: str, quantale: Quantale | None = None, kappa: str = "tensor",
               caps: Caps | None = None) -> Monad:
    """Build a monad instance from its kind code ``P``, ``F``, ``U`` or ``PV``."""
    kind = kind.upper()
    if kind == "P":
        return PowersetMonad(caps)
    if kind == "F":
        return FilterMonad(caps)
    if kind == "U":
        return UpSetMonad(caps)
    if kind == "PV":
        if quantale is None:
            raise MalformedSurface("PV requires a quantale")
        return VPowersetMonad(quantale, kappa, caps)
    raise MalformedSurface(f"unknown monad kind {kind!r}")


def sample(items: list, budget: int, seed: int) -> list:
    """Deterministic seeded subsample keeping the original order."""
    if len(items) <= budget:
        return items
    rng = random.Random(seed)
    keep = sorted(rng.sample(range(len(items)), budget))
    return [items[i] for i in keep]
