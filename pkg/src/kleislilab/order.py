"""Finite sets, total maps, induced orders, right adjoints and lattice checks.

Everything here is immutable.  Carrier elements can be any hashable value
(strings for user data, tuples for products, maps and monad elements for
derived carriers); the order of ``FinSet.elements`` is the canonical
enumeration order used throughout the package.
"""

from __future__ import annotations

from itertools import combinations
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import NoAdjoint, NotALattice
from .report import Verdict, jsonable


class FinSet:
    """A finite set with a fixed, deterministic element order."""

    __slots__ = ("elements", "_index", "_hash")

    def __init__(self, elements: Iterable[Hashable]):
        self.elements = tuple(elements)
        self._index = {x: i for i, x in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise ValueError("duplicate elements in FinSet")
        self._hash = hash(self.elements)

    @classmethod
    def named(cls, names: Iterable[str]) -> FinSet:
        """A carrier of string ids in lexicographic order."""
        names = [str(n) for n in names]
        return cls(sorted(names))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._index

    def __getitem__(self, i: int):
        return self.elements[i]

    def index(self, x) -> int:
        return self._index[x]

    def __eq__(self, other) -> bool:
        return isinstance(other, FinSet) and (self is other or self.elements == other.elements)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if len(self) <= 8:
            return f"FinSet({list(self.elements)!r})"
        return f"FinSet(<{len(self)} elements>)"

    def subsets(self) -> Iterator[frozenset]:
        """All subsets, ordered by the bitmask of their element indices."""
        els = self.elements
        for mask in range(1 << len(els)):
            yield frozenset(els[i] for i in range(len(els)) if mask >> i & 1)

    def sort(self, items: Iterable) -> list:
        """Sort members of this set into canonical order."""
        return sorted(items, key=self._index.__getitem__)

    def to_json(self):
        return [jsonable(x) for x in self.elements]


ONE = FinSet(("*",))
TWO = FinSet(("0", "1"))


def powerset(X: FinSet) -> FinSet:
    return FinSet(X.subsets())


class FinMap:
    """A total map between finite sets, stored as a value tuple along the domain."""

    __slots__ = ("domain", "codomain", "values", "_hash")

    def __init__(self, domain: FinSet, codomain: FinSet,
                 graph: Mapping | Sequence | Callable, check: bool = True):
        self.domain = domain
        self.codomain = codomain
        if callable(graph) and not isinstance(graph, Mapping):
            values = tuple(graph(x) for x in domain)
        elif isinstance(graph, Mapping):
            if check and set(graph) != set(domain.elements):
                raise ValueError("map graph must be defined on exactly the domain")
            values = tuple(graph[x] for x in domain)
        else:
            values = tuple(graph)
            if len(values) != len(domain):
                raise ValueError("value tuple length differs from domain size")
        if check:
            for v in values:
                if v not in codomain:
                    raise ValueError(f"value {v!r} not in codomain")
        self.values = values
        self._hash = hash(values)

    def __call__(self, x):
        return self.values[self.domain.index(x)]

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (isinstance(other, FinMap) and self.values == other.values
                and self.domain == other.domain and self.codomain == other.codomain)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        pairs = ", ".join(f"{x!r}->{y!r}" for x, y in zip(self.domain, self.values))
        return f"FinMap({pairs})"

    def items(self):
        return zip(self.domain.elements, self.values)

    def as_dict(self) -> dict:
        return dict(self.items())

    def compose(self, inner: FinMap) -> FinMap:
        """``self . inner``."""
        return FinMap(inner.domain, self.codomain, [self(y) for y in inner.values], check=False)

    def image(self, subset: Iterable) -> frozenset:
        return frozenset(self(x) for x in subset)

    def preimage(self, subset) -> frozenset:
        return frozenset(x for x, y in self.items() if y in subset)

    def is_bijective(self) -> bool:
        return len(self.domain) == len(self.codomain) == len(set(self.values))

    def inverse(self) -> FinMap:
        if not self.is_bijective():
            raise ValueError("map is not bijective")
        return FinMap(self.codomain, self.domain, {y: x for x, y in self.items()})

    def to_json(self):
        return {_label(x): jsonable(y) for x, y in self.items()}


def _label(x) -> str:
    if isinstance(x, str):
        return x
    import json
    return json.dumps(jsonable(x))


def identity(X: FinSet) -> FinMap:
    return FinMap(X, X, X.elements, check=False)


def constant(X: FinSet, Y: FinSet, y) -> FinMap:
    return FinMap(X, Y, [y] * len(X))


def all_maps(X: FinSet, Y: FinSet) -> Iterator[FinMap]:
    """All maps X -> Y, lexicographic in the value tuple."""
    from itertools import product
    for values in product(Y.elements, repeat=len(X)):
        yield FinMap(X, Y, values, check=False)


class SupStructure:
    """A carrier with a map sending every subset to an element."""

    def __init__(self, carrier: FinSet, sup: Callable[[frozenset], Any]):
        self.carrier = carrier
        self.sup = sup


class FinOrder:
    """A finite (pre)order.

    The relation is given either as a boolean matrix over ``carrier`` or as a
    predicate; the matrix is then built lazily.  Optional ``join``/``meet``
    callables replace the brute-force lattice operations for large carriers.
    """

    def __init__(self, carrier: FinSet, leq, join: Callable | None = None,
                 meet: Callable | None = None):
        self.carrier = carrier
        if isinstance(leq, np.ndarray):
            self._matrix = leq.astype(bool)
            self._leq = None
        else:
            self._matrix = None
            self._leq = leq
        self._join = join
        self._meet = meet

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            els = self.carrier.elements
            n = len(els)
            m = np.zeros((n, n), dtype=bool)
            for i, x in enumerate(els):
                for j, y in enumerate(els):
                    m[i, j] = self._leq(x, y)
            self._matrix = m
        return self._matrix

    def leq(self, x, y) -> bool:
        if self._leq is not None:
            return bool(self._leq(x, y))
        c = self.carrier
        return bool(self._matrix[c.index(x), c.index(y)])

    def __len__(self) -> int:
        return len(self.carrier)

    def is_reflexive(self) -> bool:
        return bool(np.all(np.diag(self.matrix)))

    def is_transitive(self) -> bool:
        m = self.matrix.astype(np.int64)
        return bool(np.all(((m @ m) > 0) <= self.matrix))

    def is_antisymmetric(self) -> bool:
        m = self.matrix
        both = m & m.T
        return bool(np.array_equal(both, np.eye(len(m), dtype=bool)))

    def is_preorder(self) -> bool:
        return self.is_reflexive() and self.is_transitive()

    def is_poset(self) -> bool:
        return self.is_preorder() and self.is_antisymmetric()

    def down(self, x) -> frozenset:
        j = self.carrier.index(x)
        return frozenset(self.carrier[i] for i in np.flatnonzero(self.matrix[:, j]))

    def up(self, x) -> frozenset:
        i = self.carrier.index(x)
        return frozenset(self.carrier[j] for j in np.flatnonzero(self.matrix[i, :]))

    def join(self, subset: Iterable):
        """Least upper bound; raises NotALattice if there is none."""
        subset = list(subset)
        if self._join is not None:
            return self._join(subset)
        return self._extremum(subset, upper=True)

    def meet(self, subset: Iterable):
        subset = list(subset)
        if self._meet is not None:
            return self._meet(subset)
        return self._extremum(subset, upper=False)

    def _extremum(self, subset: list, upper: bool):
        m = self.matrix if upper else self.matrix.T
        idx = [self.carrier.index(s) for s in subset]
        bounds = np.all(m[idx, :], axis=0) if idx else np.ones(len(m), dtype=bool)
        cand = np.flatnonzero(bounds)
        for c in cand:
            if np.all(m[c, cand]):
                return self.carrier[c]
        raise NotALattice(f"no {'join' if upper else 'meet'} for {subset!r}")

    def top(self):
        return self.meet([])

    def bottom(self):
        return self.join([])

    def restrict(self, sub: FinSet) -> FinOrder:
        idx = [self.carrier.index(x) for x in sub]
        return FinOrder(sub, self.matrix[np.ix_(idx, idx)])

    def opposite(self) -> FinOrder:
        return FinOrder(self.carrier, self.matrix.T.copy())

    def pointwise(self, maps: FinSet) -> FinOrder:
        """The pointwise order on a set of maps into this order's carrier."""
        def leq(f: FinMap, g: FinMap) -> bool:
            return all(self.leq(a, b) for a, b in zip(f.values, g.values))
        return FinOrder(maps, leq)

    def lattice_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Join and meet tables as index arrays; NotALattice if a pair lacks either."""
        m = self.matrix
        n = len(m)
        join = np.empty((n, n), dtype=np.int64)
        meet = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                for table, rel in ((join, m), (meet, m.T)):
                    cand = np.flatnonzero(rel[i] & rel[j])
                    least = [c for c in cand if np.all(rel[c, cand])]
                    if len(least) != 1:
                        kind = "join" if table is join else "meet"
                        raise NotALattice(
                            f"{kind} of {self.carrier[i]!r}, {self.carrier[j]!r} does not exist")
                    table[i, j] = table[j, i] = least[0]
        return join, meet


def chain_order(X: FinSet) -> FinOrder:
    """The total order following the element order of ``X``."""
    n = len(X)
    return FinOrder(X, np.triu(np.ones((n, n), dtype=bool)))


def induced_order(s: SupStructure, max_subset_check: int = 12) -> FinOrder:
    """The order ``x <= y iff sup({x, y}) = y`` of a sup-structure.

    The result is checked to be a partial order in which ``sup`` computes least
    upper bounds: over all subsets when the carrier has at most
    ``max_subset_check`` elements, otherwise over the empty set, all pairs and
    the whole carrier.
    """
    els = s.carrier.elements
    n = len(els)
    m = np.zeros((n, n), dtype=bool)
    for i, x in enumerate(els):
        for j in range(i, n):
            y = els[j]
            top = s.sup(frozenset((x, y)))
            if top not in s.carrier:
                raise NotALattice(f"sup({{{x!r}, {y!r}}}) = {top!r} is outside the carrier")
            m[i, j] = top == y
            m[j, i] = top == x
    order = FinOrder(s.carrier, m, join=lambda S: s.sup(frozenset(S)))
    if not order.is_antisymmetric():
        raise NotALattice("induced relation is not antisymmetric")
    if not order.is_transitive():
        raise NotALattice("induced relation is not transitive")
    if n <= max_subset_check:
        subsets = s.carrier.subsets()
    else:
        subsets = [frozenset(), frozenset(els)] + [frozenset(p) for p in combinations(els, 2)]
    for S in subsets:
        if not _is_lub(order, S, s.sup(S)):
            raise NotALattice(f"sup of {sorted(map(repr, S))} is not a least upper bound")
    return order


def _is_lub(order: FinOrder, S: frozenset, cand) -> bool:
    m = order.matrix
    c = order.carrier
    idx = [c.index(x) for x in S]
    k = c.index(cand)
    if idx and not np.all(m[idx, k]):
        return False
    bounds = np.all(m[idx, :], axis=0) if idx else np.ones(len(m), dtype=bool)
    return bool(np.all(m[k, bounds]))


def right_adjoint(f: FinMap, ordX: FinOrder, ordY: FinOrder) -> FinMap:
    """The right adjoint ``f*(y) = join{x | f(x) <= y}``, verified before returning.

    Raises NoAdjoint when a needed join is missing, when either Galois
    inequality ``1 <= f*.f`` or ``f.f* <= 1`` fails, or when the equivalence
    ``f(x) <= y iff x <= f*(y)`` fails somewhere (which also catches a
    non-monotone f).
    """
    X, Y = f.domain, f.codomain
    fx = f.values
    table = {}
    for y in Y:
        below = [x for x, v in zip(X.elements, fx) if ordY.leq(v, y)]
        try:
            table[y] = ordX.join(below)
        except NotALattice as exc:
            raise NoAdjoint(f"join of the preimage of {y!r} does not exist") from exc
    adj = FinMap(Y, X, table, check=False)
    for x, v in zip(X.elements, fx):
        if not ordX.leq(x, table[v]):
            raise NoAdjoint(f"1 <= f*.f fails at {x!r}")
    for y in Y:
        if not ordY.leq(f(table[y]), y):
            raise NoAdjoint(f"f.f* <= 1 fails at {y!r}")
    for x, v in zip(X.elements, fx):
        for y in Y:
            if ordY.leq(v, y) != ordX.leq(x, table[y]):
                raise NoAdjoint(f"f(x) <= y iff x <= f*(y) fails at {x!r}, {y!r}")
    return adj


def is_distributive(lat: FinOrder) -> Verdict:
    """``x meet (y join z) = (x meet y) join (x meet z)`` for all triples.

    The negative verdict carries the first violating triple in canonical order.
    """
    join, meet = lat.lattice_tables()
    n = len(join)
    c = lat.carrier
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if meet[x, join[y, z]] != join[meet[x, y], meet[x, z]]:
                    return Verdict(False, (c[x], c[y], c[z]))
    return Verdict(True)


def is_codistributive(lat: FinOrder) -> Verdict:
    """The dual law ``x join (y meet z) = (x join y) meet (x join z)``."""
    join, meet = lat.lattice_tables()
    n = len(join)
    c = lat.carrier
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if join[x, meet[y, z]] != meet[join[x, y], join[x, z]]:
                    return Verdict(False, (c[x], c[y], c[z]))
    return Verdict(True)


def product_set(*factors: FinSet) -> FinSet:
    """The cartesian product of two (or more) sets, lexicographic in the factor orders."""
    from itertools import product
    return FinSet(product(*[F.elements for F in factors]))


def projections(X: FinSet, Y: FinSet) -> tuple[FinMap, FinMap]:
    XY = product_set(X, Y)
    return (FinMap(XY, X, [p[0] for p in XY], check=False),
            FinMap(XY, Y, [p[1] for p in XY], check=False))


def pairing(f: FinMap, g: FinMap) -> FinMap:
    """``<f, g>: Z -> X x Y`` for maps with a common domain."""
    XY = product_set(f.codomain, g.codomain)
    return FinMap(f.domain, XY, [(a, b) for a, b in zip(f.values, g.values)], check=False)


def product_map(f: FinMap, g: FinMap) -> FinMap:
    """``f x g: X x Y -> X' x Y'``."""
    src = product_set(f.domain, g.domain)
    tgt = product_set(f.codomain, g.codomain)
    return FinMap(src, tgt, [(f(a), g(b)) for a, b in src], check=False)


def associator(X: FinSet, Y: FinSet, Z: FinSet) -> FinMap:
    """The bijection ``X x (Y x Z) -> (X x Y) x Z``."""
    src = product_set(X, product_set(Y, Z))
    tgt = product_set(product_set(X, Y), Z)
    return FinMap(src, tgt, [((x, y), z) for x, (y, z) in src], check=False)


def right_unitor(X: FinSet) -> FinMap:
    """The bijection ``X -> X x 1``."""
    return FinMap(X, product_set(X, ONE), [(x, "*") for x in X], check=False)


def left_unitor(X: FinSet) -> FinMap:
    """The bijection ``X -> 1 x X``."""
    return FinMap(X, product_set(ONE, X), [("*", x) for x in X], check=False)
