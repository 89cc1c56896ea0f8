"""Surface encodings of T-monoids and the instance JSON format.

Instance files look like::

    {"monad": {"kind": "U"}, "carrier": ["1", "2", "3"],
     "structure": {"1": [["1", "2"], ["1", "3"]], ...}}

Per kind, ``structure`` holds: P the down-set of each point (or use
``"relation": [[a, b], ...]`` for pairs a <= b, reflexive pairs implied); F neighbourhood generators
whose intersection generates the filter (or use ``"opens": [...]``); U the
generators of each up-family (``"opens"`` also accepted); PV the row
``{"y": value}`` of each point, missing entries meaning bottom.  For PV the
monad entry also names a quantale (built-in name, path, or inline object)
and may set ``"kappa": "tensor" | "cartesian"``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .errors import MalformedSurface
from .instances import Filter, Monad, UpFamily, make_monad
from .kleisli import KleisliMonoid
from .order import FinOrder, FinSet
from .quantale import Quantale, load_quantale, quantale_from_json
from .report import Caps, jsonable

_INSTANCE_KEYS = {"monad", "carrier", "structure", "opens", "relation", "name"}


def monad_from_json(obj: Any, caps: Caps | None = None) -> Monad:
    if isinstance(obj, str):
        obj = {"kind": obj}
    if not isinstance(obj, dict) or "kind" not in obj:
        raise MalformedSurface("monad entry needs a 'kind'")
    extra = set(obj) - {"kind", "quantale", "kappa"}
    if extra:
        raise MalformedSurface(f"unknown monad keys: {sorted(extra)}")
    q = obj.get("quantale")
    if isinstance(q, dict):
        q = quantale_from_json(q)
    elif isinstance(q, str):
        q = load_quantale(q)
    return make_monad(str(obj["kind"]), q, obj.get("kappa", "tensor"), caps)


def monad_to_json(m: Monad) -> dict:
    d: dict = {"kind": m.kind}
    if m.quantale is not None:
        q = m.quantale
        d["quantale"] = q.name if _is_builtin_name(q.name) else q.to_json()
        d["kappa"] = m.kappa_flavor
    return d


def _is_builtin_name(name: str) -> bool:
    return name == "bool2" or name.startswith(("chain_min(", "lukasiewicz("))


def _elem(x: Any, X: FinSet) -> str:
    x = str(x)
    if x not in X:
        raise MalformedSurface(f"unknown element id {x!r}")
    return x


def _subset(obj: Any, X: FinSet) -> frozenset:
    if not isinstance(obj, list):
        raise MalformedSurface(f"expected a list of element ids, got {obj!r}")
    return frozenset(_elem(x, X) for x in obj)


def _per_point(data: dict, X: FinSet) -> dict:
    if not isinstance(data, dict):
        raise MalformedSurface("structure must map each point to its data")
    keys = {str(k) for k in data}
    if keys != set(X.elements):
        missing = sorted(set(X.elements) - keys)
        extra = sorted(keys - set(X.elements))
        raise MalformedSurface(f"structure not total: missing {missing}, unknown {extra}")
    return {str(k): v for k, v in data.items()}


def check_topology(opens: list[frozenset], X: FinSet) -> None:
    """Raise MalformedSurface unless ``opens`` contains {} and X and is closed under union and meet."""
    fam = set(opens)
    whole = frozenset(X.elements)
    if frozenset() not in fam or whole not in fam:
        raise MalformedSurface("opens must contain the empty set and the carrier")
    for a in fam:
        for b in fam:
            if a | b not in fam or a & b not in fam:
                raise MalformedSurface(f"opens not closed under union/intersection at {sorted(a)}, {sorted(b)}")


def elaborate(data: dict, caps: Caps | None = None) -> KleisliMonoid:
    """Build the structure map described by instance data (monoid laws are not checked here)."""
    if not isinstance(data, dict):
        raise MalformedSurface("instance must be a JSON object")
    extra = set(data) - _INSTANCE_KEYS
    if extra:
        raise MalformedSurface(f"unknown instance keys: {sorted(extra)}")
    if "monad" not in data or "carrier" not in data:
        raise MalformedSurface("instance needs 'monad' and 'carrier'")
    m = monad_from_json(data["monad"], caps)
    names = [str(x) for x in data["carrier"]]
    if len(set(names)) != len(names):
        raise MalformedSurface("duplicate element ids in carrier")
    X = FinSet.named(names)
    given = [k for k in ("structure", "opens", "relation") if k in data]
    if len(given) != 1:
        raise MalformedSurface("give exactly one of 'structure', 'opens', 'relation'")
    how = given[0]
    alpha: dict = {}
    if m.kind == "P":
        if how == "relation":
            pairs = [(_elem(a, X), _elem(b, X)) for a, b in data["relation"]]
            alpha = {x: frozenset(a for a, b in pairs if b == x) | {x} for x in X}
        elif how == "structure":
            alpha = {x: _subset(v, X) for x, v in _per_point(data["structure"], X).items()}
        else:
            raise MalformedSurface("P instances take 'structure' or 'relation'")
    elif m.kind == "F":
        if how == "opens":
            opens = [_subset(o, X) for o in data["opens"]]
            check_topology(opens, X)
            alpha = {x: Filter(frozenset.intersection(*[o for o in opens if x in o])) for x in X}
        elif how == "structure":
            for x, gens in _per_point(data["structure"], X).items():
                sets = [_subset(g, X) for g in _list(gens)]
                alpha[x] = Filter(frozenset(X.elements).intersection(*sets))
        else:
            raise MalformedSurface("F instances take 'structure' or 'opens'")
    elif m.kind == "U":
        if how == "opens":
            opens = [_subset(o, X) for o in data["opens"]]
            alpha = {x: UpFamily(o for o in opens if x in o) for x in X}
        elif how == "structure":
            alpha = {x: UpFamily(_subset(g, X) for g in _list(gens))
                     for x, gens in _per_point(data["structure"], X).items()}
        else:
            raise MalformedSurface("U instances take 'structure' or 'opens'")
    else:
        if how != "structure":
            raise MalformedSurface("PV instances take a 'structure' matrix")
        q: Quantale = m.quantale
        for x, row in _per_point(data["structure"], X).items():
            if not isinstance(row, dict):
                raise MalformedSurface(f"row of {x!r} must be an object")
            vals = {}
            for y, v in row.items():
                v = str(v)
                if v not in q.carrier:
                    raise MalformedSurface(f"value {v!r} not in quantale {q.name}")
                vals[_elem(y, X)] = v
            alpha[x] = m.vfun(vals)
    return KleisliMonoid(m, X, alpha, name=data.get("name"))


def _list(obj: Any) -> list:
    if not isinstance(obj, list):
        raise MalformedSurface(f"expected a list, got {obj!r}")
    return obj


def encode(c: KleisliMonoid) -> dict:
    """Canonical instance data of a monoid on a carrier of string ids."""
    m, X = c.monad, c.carrier
    srt = lambda S: X.sort(S)  # noqa: E731
    if m.kind == "P":
        structure = {x: srt(c.alpha[x]) for x in X}
    elif m.kind == "F":
        structure = {x: [srt(c.alpha[x].gen)] for x in X}
    elif m.kind == "U":
        structure = {x: sorted((srt(g) for g in c.alpha[x].gens), key=lambda g: (len(g), g))
                     for x in X}
    else:
        structure = {x: {y: c.alpha[x](y) for y in X} for x in X}
    d = {"monad": monad_to_json(m), "carrier": list(X.elements), "structure": structure}
    if c.name:
        d["name"] = c.name
    return d


def load_instance(path: str | Path, caps: Caps | None = None) -> KleisliMonoid:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise MalformedSurface(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedSurface(f"invalid JSON in {path}: {exc}") from exc
    c = elaborate(data, caps)
    if c.name is None:
        c.name = path.stem
    return c


def save_instance(c: KleisliMonoid, path: str | Path) -> None:
    Path(path).write_text(json.dumps(encode(c), indent=2) + "\n")


def opens_of(c: KleisliMonoid) -> tuple[list[frozenset], FinOrder]:
    """Open sets (O in alpha(x) for every x in O) ordered by inclusion.

    The order's join is union and its meet is the largest open inside the
    intersection.
    """
    if c.monad.kind not in ("F", "U"):
        raise MalformedSurface("opens_of needs an F- or U-monoid")
    X = c.carrier
    opens = [O for O in X.subsets() if all(O in c.alpha[x] for x in O)]
    fam = FinSet(opens)
    n = len(opens)
    m = np.array([[a <= b for b in opens] for a in opens], dtype=bool).reshape(n, n)

    def meet(S):
        inter = frozenset(X.elements).intersection(*S) if S else frozenset(X.elements)
        return max((o for o in opens if o <= inter), key=len)

    return opens, FinOrder(fam, m, join=lambda S: frozenset().union(*S), meet=meet)


def topology_as_interior(c: KleisliMonoid, U: Monad | None = None) -> KleisliMonoid:
    """Re-encode an F-monoid (a topology) as a U-monoid: alpha(x) = opens containing x."""
    from .instances import UpSetMonad
    U = U or UpSetMonad(c.monad.caps)
    opens, _ = opens_of(c)
    return KleisliMonoid(U, c.carrier, {x: UpFamily(o for o in opens if x in o) for x in c.carrier},
                         name=f"{c.name or 'space'} as interior space")


def preorder_as_topology(c: KleisliMonoid, F: Monad | None = None) -> KleisliMonoid:
    """The generator iso F = P on structures: ``alpha(x) -> up alpha(x)``."""
    from .instances import FilterMonad
    F = F or FilterMonad(c.monad.caps)
    return KleisliMonoid(F, c.carrier, {x: Filter(c.alpha[x]) for x in c.carrier}, name=c.name)


def to_json_text(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2)
