"""Finite quantales: a complete lattice with an associative, join-preserving tensor."""

from __future__ import annotations

import json
from fractions import Fraction
from functools import reduce
from itertools import product
from pathlib import Path

import numpy as np

from .errors import MalformedSurface, NotALattice, UnknownName
from .order import FinOrder, FinSet, is_distributive
from .report import CheckReport


class Quantale:
    """A finite quantale with tables over string element ids.

    ``carrier`` keeps the declared element order.  Joins, meets, the tensor
    and its residuals are precomputed as dictionaries, so all operations are
    table lookups.
    """

    def __init__(self, carrier, leq_pairs, tensor: dict, unit: str, name: str | None = None):
        self.carrier = carrier if isinstance(carrier, FinSet) else FinSet(carrier)
        els = self.carrier.elements
        n = len(els)
        m = np.zeros((n, n), dtype=bool)
        for u, v in leq_pairs:
            m[self.carrier.index(u), self.carrier.index(v)] = True
        np.fill_diagonal(m, True)
        # close under transitivity so that a list of covers suffices
        for _ in range(n):
            m2 = m | ((m.astype(np.int64) @ m.astype(np.int64)) > 0)
            if np.array_equal(m2, m):
                break
            m = m2
        self.order = FinOrder(self.carrier, m)
        if not self.order.is_antisymmetric():
            raise MalformedSurface("quantale order is not antisymmetric")
        self.name = name or "custom"
        jt, mt = self.order.lattice_tables()
        self._join = {(els[i], els[j]): els[jt[i, j]] for i in range(n) for j in range(n)}
        self._meet = {(els[i], els[j]): els[mt[i, j]] for i in range(n) for j in range(n)}
        self._leq = {(els[i], els[j]): bool(m[i, j]) for i in range(n) for j in range(n)}
        self.bottom = self.order.bottom()
        self.top = self.order.top()
        missing = [p for p in product(els, els) if p not in tensor]
        if missing:
            raise MalformedSurface(f"tensor table missing entries, e.g. {missing[0]}")
        for w in tensor.values():
            if w not in self.carrier:
                raise MalformedSurface(f"tensor value {w!r} not in carrier")
        if unit not in self.carrier:
            raise MalformedSurface(f"unit {unit!r} not in carrier")
        self._tensor = dict(tensor)
        self.unit = unit

    def __repr__(self) -> str:
        return f"Quantale({self.name})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Quantale) and self.carrier == other.carrier
                and self._tensor == other._tensor and self.unit == other.unit
                and self._leq == other._leq)

    def __hash__(self) -> int:
        return hash((self.carrier, self.unit))

    # lattice and tensor operations
    def leq(self, u: str, v: str) -> bool:
        return self._leq[u, v]

    def tensor(self, u: str, v: str) -> str:
        return self._tensor[u, v]

    def join(self, values) -> str:
        return reduce(lambda a, b: self._join[a, b], values, self.bottom)

    def meet(self, values) -> str:
        return reduce(lambda a, b: self._meet[a, b], values, self.top)

    def join2(self, u: str, v: str) -> str:
        return self._join[u, v]

    def meet2(self, u: str, v: str) -> str:
        return self._meet[u, v]

    def right_residual(self, u: str, w: str) -> str:
        """Largest ``x`` with ``x (x) u <= w``."""
        return self.join([x for x in self.carrier if self._leq[self._tensor[x, u], w]])

    def left_residual(self, u: str, w: str) -> str:
        """Largest ``x`` with ``u (x) x <= w``."""
        return self.join([x for x in self.carrier if self._leq[self._tensor[u, x], w]])

    # flags
    @property
    def commutative(self) -> bool:
        return all(self._tensor[u, v] == self._tensor[v, u] for u, v in product(self.carrier, repeat=2))

    @property
    def frame(self) -> bool:
        return bool(is_distributive(self.order))

    @property
    def unit_is_top(self) -> bool:
        return self.unit == self.top

    def to_json(self) -> dict:
        els = self.carrier.elements
        return {
            "carrier": list(els),
            "leq": [[u, v] for u in els for v in els if u != v and self._leq[u, v]],
            "tensor": {f"{u},{v}": self._tensor[u, v] for u in els for v in els},
            "unit": self.unit,
        }


def check_quantale(q: Quantale) -> CheckReport:
    """Associativity, unit laws, join-distribution in both variables, and flags.

    Join-distribution is checked over all subsets of the carrier, which also
    covers the empty join (``bottom (x) v = bottom``).
    """
    rep = CheckReport(f"quantale {q.name}")
    els = q.carrier.elements
    t = q.tensor
    fail = next(((a, b, c) for a, b, c in product(els, repeat=3)
                 if t(t(a, b), c) != t(a, t(b, c))), None)
    rep.law("associativity", len(els) ** 3, fail)
    fail = next((v for v in els if t(q.unit, v) != v or t(v, q.unit) != v), None)
    rep.law("unit", len(els), fail)
    fail = None
    count = 0
    for S in q.carrier.subsets():
        js = q.join(S)
        for v in els:
            count += 1
            if t(v, js) != q.join(t(v, s) for s in S):
                fail = {"side": "left", "v": v, "S": sorted(S)}
                break
            if t(js, v) != q.join(t(s, v) for s in S):
                fail = {"side": "right", "v": v, "S": sorted(S)}
                break
        if fail:
            break
    rep.law("join-distribution", count, fail)
    fail = next((v for v in els if t(q.bottom, v) != q.bottom or t(v, q.bottom) != q.bottom), None)
    rep.law("bottom-absorbs", len(els), fail)
    rep.stats.update(commutative=q.commutative, frame=q.frame, unit_is_top=q.unit_is_top,
                     size=len(els))
    return rep


def _chain(labels, tensor_fn, unit, name) -> Quantale:
    leq = [(labels[i], labels[i + 1]) for i in range(len(labels) - 1)]
    tensor = {(a, b): tensor_fn(i, j) for i, a in enumerate(labels) for j, b in enumerate(labels)}
    return Quantale(labels, leq, tensor, unit, name=name)


def bool2() -> Quantale:
    """The two-element boolean quantale with tensor = meet and unit = top."""
    labels = ["0", "1"]
    return _chain(labels, lambda i, j: labels[min(i, j)], "1", "bool2")


def chain_min(n: int) -> Quantale:
    """The n-element chain ``0 < 1 < ... < n-1`` with tensor = min."""
    if n < 2:
        raise ValueError("chain_min needs n >= 2")
    labels = [str(i) for i in range(n)]
    return _chain(labels, lambda i, j: labels[min(i, j)], labels[-1], f"chain_min({n})")


def lukasiewicz(n: int) -> Quantale:
    """The chain ``{0, 1/(n-1), ..., 1}`` with ``a (x) b = max(0, a + b - 1)``."""
    if n < 2:
        raise ValueError("lukasiewicz needs n >= 2")
    vals = [Fraction(i, n - 1) for i in range(n)]
    labels = [str(v) for v in vals]
    return _chain(labels, lambda i, j: labels[max(0, i + j - (n - 1))], labels[-1],
                  f"lukasiewicz({n})")


def builtin(name: str) -> Quantale:
    """Look up ``bool2``, ``chain_min(n)`` or ``lukasiewicz(n)``; the result is law-checked."""
    name = name.strip()
    if name == "bool2":
        q = bool2()
    else:
        head, _, rest = name.partition("(")
        if not rest.endswith(")") or not rest[:-1].strip().isdigit():
            raise UnknownName(name)
        n = int(rest[:-1])
        if n < 2:
            raise UnknownName(f"{name}: n must be >= 2")
        if head == "chain_min":
            q = chain_min(n)
        elif head == "lukasiewicz":
            q = lukasiewicz(n)
        else:
            raise UnknownName(name)
    rep = check_quantale(q)
    assert rep.ok, rep.summary()
    return q


_QUANTALE_KEYS = {"carrier", "leq", "tensor", "unit"}


def quantale_from_json(data: dict, name: str | None = None) -> Quantale:
    """Strict parser for ``{"carrier", "leq", "tensor", "unit"}``; the laws are checked."""
    if not isinstance(data, dict):
        raise MalformedSurface("quantale must be a JSON object")
    extra = set(data) - _QUANTALE_KEYS
    if extra:
        raise MalformedSurface(f"unknown quantale keys: {sorted(extra)}")
    missing = _QUANTALE_KEYS - set(data)
    if missing:
        raise MalformedSurface(f"missing quantale keys: {sorted(missing)}")
    carrier = [str(x) for x in data["carrier"]]
    tensor = {}
    for key, val in data["tensor"].items():
        parts = key.split(",")
        if len(parts) != 2:
            raise MalformedSurface(f"bad tensor key {key!r}")
        tensor[parts[0].strip(), parts[1].strip()] = str(val)
    try:
        q = Quantale(carrier, [tuple(map(str, p)) for p in data["leq"]], tensor,
                     str(data["unit"]), name=name)
    except (KeyError, ValueError, NotALattice) as exc:
        raise MalformedSurface(f"invalid quantale: {exc}") from exc
    rep = check_quantale(q)
    if not rep.ok:
        raise MalformedSurface(f"quantale laws fail: {rep.witness}")
    return q


def load_quantale(source: str) -> Quantale:
    """A built-in name or a path to a quantale JSON file."""
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise MalformedSurface(f"cannot read quantale file {source}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise MalformedSurface(f"invalid JSON in {source}: {exc}") from exc
        return quantale_from_json(data, name=path.stem)
    return builtin(source)
