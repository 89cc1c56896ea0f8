"""Check reports, size caps and canonical JSON encoding."""

from __future__ import annotations

import json
import os
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator

from .errors import CapExceeded, MalformedSurface

PASS = "pass"
FAIL = "fail"
CAP = "cap-exceeded"
UNMET = "hypothesis-unmet"

CAPS_ENV = "KLEISLILAB_CAPS"

# a report's verdict is the most severe verdict among its parts
SEVERITY = {PASS: 0, UNMET: 1, CAP: 2, FAIL: 3}


@dataclass(frozen=True)
class Caps:
    """Size limits for materializing TX, TTX (and TTTX) and hom-set candidates."""

    tx: int = 20_000
    ttx: int = 200_000
    homs: int = 1_000_000

    @classmethod
    def from_env(cls, **overrides: int | None) -> Caps:
        """Defaults, then ``KLEISLILAB_CAPS`` (``tx=..,ttx=..,homs=..``), then overrides."""
        values = {"tx": cls.tx, "ttx": cls.ttx, "homs": cls.homs}
        raw = os.environ.get(CAPS_ENV, "").strip()
        if raw:
            for item in raw.split(","):
                key, _, val = item.partition("=")
                key = key.strip()
                if key not in values or not val.strip().isdigit():
                    raise MalformedSurface(f"bad {CAPS_ENV} entry {item!r}")
                values[key] = int(val)
        for key, val in overrides.items():
            if val is not None:
                values[key] = int(val)
        return cls(**values)

    def check(self, what: str, size: float, kind: str = "tx") -> None:
        cap = getattr(self, kind)
        if size > cap:
            raise CapExceeded(what, size, cap)


def jsonable(obj: Any) -> Any:
    """Encode library values as deterministic JSON-compatible data.

    Sets are sorted by the JSON text of their encoded members, so the output
    does not depend on hash randomization.
    """
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, (tuple, list)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, (set, frozenset)):
        enc = [jsonable(x) for x in obj]
        return sorted(enc, key=lambda e: json.dumps(e, sort_keys=True))
    if isinstance(obj, dict):
        return {_key(k): jsonable(v) for k, v in obj.items()}
    return repr(obj)


def _key(k: Any) -> str:
    if isinstance(k, str):
        return k
    return json.dumps(jsonable(k), sort_keys=True)


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=False)


@dataclass
class CheckReport:
    """Machine-readable verdict of a check, with a witness for every failure.

    ``parts`` holds one sub-report per law or sub-check; the verdict of a
    report with parts is the worst verdict among them.
    """

    name: str
    verdict: str = PASS
    witness: Any = None
    stats: dict = field(default_factory=dict)
    parts: list[CheckReport] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict == PASS

    def __bool__(self) -> bool:
        return self.ok

    def add(self, part: CheckReport) -> CheckReport:
        self.parts.append(part)
        if SEVERITY[part.verdict] > SEVERITY[self.verdict]:
            self.verdict = part.verdict
            self.witness = {"part": part.name, "witness": part.witness}
        return part

    def cap(self, name: str, exc: Exception) -> CheckReport:
        """Record a part that could not run because a cap was exceeded."""
        return self.add(CheckReport(name, CAP, str(exc)))

    def law(self, name: str, checked: int, failure: Any = None, **stats: Any) -> CheckReport:
        """Record a scanned law: ``failure`` is None on success, else the witness."""
        part = CheckReport(name, PASS if failure is None else FAIL, failure,
                           {"checked": checked, **stats})
        return self.add(part)

    def fail(self, witness: Any, **stats: Any) -> CheckReport:
        self.verdict = FAIL
        self.witness = witness
        self.stats.update(stats)
        return self

    def find(self, name: str) -> CheckReport:
        for p in self.parts:
            if p.name == name:
                return p
        raise KeyError(name)

    @contextmanager
    def timed(self, label: str = "total") -> Iterator[None]:
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings[label] = round(time.perf_counter() - t0, 6)

    def to_dict(self, timings: bool = False) -> dict:
        d: dict[str, Any] = {"name": self.name, "verdict": self.verdict}
        if self.witness is not None:
            d["witness"] = jsonable(self.witness)
        if self.stats:
            d["stats"] = jsonable(self.stats)
        if self.parts:
            d["parts"] = [p.to_dict(timings) for p in self.parts]
        if timings and self.timings:
            d["timings"] = dict(self.timings)
        return d

    def to_json(self) -> dict:
        return self.to_dict()

    def summary(self) -> str:
        lines = [f"{self.name}: {self.verdict}"]
        for p in self.parts:
            lines.extend("  " + ln for ln in p.summary().splitlines())
        return "\n".join(lines)


@dataclass(frozen=True)
class Verdict:
    """A boolean answer that carries a witness when it is negative."""

    holds: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.holds


def first_failure(items, predicate):
    """Return ``(count, first item failing predicate or None)``."""
    n = 0
    for item in items:
        n += 1
        if not predicate(item):
            return n, item
    return n, None
