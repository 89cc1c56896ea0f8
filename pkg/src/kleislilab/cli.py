"""Command-line front end: ``kleislilab <command> ...``.

Every command prints one deterministic JSON report on stdout.  Exit codes:
0 pass, 1 fail (or hypothesis unmet), 2 usage or malformed input, 3 cap
exceeded.  ``--replay REPORT`` re-runs the invocation recorded in a previous
report and exits 0 iff the verdict and witness are reproduced.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable

from .errors import (CapExceeded, HypothesisUnmet, KleisliLabError, MalformedSurface,
                     ModeUnsupported, MonadMismatch, NotExponentiable, UnknownName)
from .expo import (adjunction_count, compare_conv, conv, conv_closed_form, conv_is_algebra,
                   decide, exponential, hom_presentations)
from .instances import make_monad
from .kleisli import box_product, check_monoid, enumerate_monoids, hom_set
from .monad import check_all_laws
from .order import FinSet
from .quantale import load_quantale
from .report import CAP, FAIL, PASS, UNMET, Caps, CheckReport, jsonable
from .surface import encode, load_instance

EXIT = {PASS: 0, FAIL: 1, UNMET: 1, CAP: 3}

# counts of T-monoids on n points, checked by ``enumerate``
GOLDEN = {"P": {1: 1, 2: 4, 3: 29}, "F": {1: 1, 2: 4, 3: 29}, "U": {1: 2, 2: 7, 3: 61}}


def _caps(args) -> Caps:
    return Caps.from_env(tx=args.cap_tx, ttx=args.cap_ttx, homs=args.cap_homs)


def _monad(args):
    q = load_quantale(args.quantale) if args.quantale else None
    return make_monad(args.monad, q, args.kappa, _caps(args))


def _load(path: str, args, require_monoid: bool = True):
    c = load_instance(path, _caps(args))
    if require_monoid:
        rep = check_monoid(c, mu_star=False)
        if not rep.ok:
            raise MalformedSurface(f"{path} is not a T-monoid: {rep.witness}")
    return c


def cmd_check_laws(args) -> dict:
    m = _monad(args)
    rep = check_all_laws(m, args.size, args.mode or "exhaustive", seed=args.seed)
    return rep.to_dict(args.timings)


def cmd_check_monoid(args) -> dict:
    c = _load(args.instance, args, require_monoid=False)
    return check_monoid(c).to_dict(args.timings)


def cmd_hom(args) -> dict:
    src, tgt = _load(args.source, args), _load(args.target, args)
    hs = hom_set(src, tgt)
    return {"name": "hom-set", "verdict": PASS, "count": len(hs.maps),
            "order": hs.order_source, "maps": [f.to_json() for f in hs.maps]}


def cmd_box(args) -> dict:
    a, b = _load(args.left, args), _load(args.right, args)
    c = box_product(a, b)
    rep = check_monoid(c, mu_star=False)
    c.name = None
    return {"name": "box", "verdict": rep.verdict, "witness": rep.witness,
            "carrier": [list(p) for p in c.carrier],
            "structure": {json.dumps(list(p)): jsonable(t) for p, t in c.alpha.items()}}


def cmd_conv(args) -> dict:
    x = _load(args.instance, args)
    c = conv(x)
    rep = CheckReport("conv", stats={"W": len(c.W)})
    out: dict[str, Any] = {"W": [g.to_json() for g in c.W]}
    if x.monad.kind in ("F", "U"):
        out["presentations"] = [{"closed": p["closed"], "open": p["open"]} for p in hom_presentations(c)]
        out["convention"] = "[X,2] ordered pointwise: closed sets by inclusion"
    try:
        closed = conv_closed_form(c)
        rep.add(compare_conv(c, closed))
        out["closed_form"] = closed.formula
    except KleisliLabError as exc:
        if isinstance(exc, CapExceeded):
            rep.cap("closed-form", exc)
        else:
            out["closed_form"] = None
    if args.table:
        try:
            out["table"] = [[jsonable(t), g.to_json()] for t, g in c.table().items()]
        except CapExceeded as exc:
            rep.cap("table", exc)
    rep.add(conv_is_algebra(c, args.mode or "auto", args.seed))
    d = rep.to_dict(args.timings)
    d.update(out)
    return d


def cmd_expo(args) -> dict:
    x = _load(args.instance, args)
    tests = None
    if args.tests:
        tests = [load_instance(p, _caps(args)) for p in sorted(Path(args.tests).glob("*.json"))]
    v = decide(x, args.route, tests, args.mode or "auto", args.seed)
    d = v.to_json()
    d["name"] = "expo"
    # a non-exponentiable verdict is reported as a failure carrying its witness
    d["verdict"] = FAIL if v.exponentiable is False and v.status == PASS else v.status
    return d


def cmd_enumerate(args) -> dict:
    m = _monad(args)
    X = FinSet([str(i) for i in range(args.size)])
    found = enumerate_monoids(m, X)
    files = []
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for c in found:
            name = f"{c.name}.json"
            (out / name).write_text(json.dumps(encode(c), indent=2) + "\n")
            files.append(name)
    golden = GOLDEN.get(m.kind, {}).get(args.size)
    verdict = PASS if golden is None or golden == len(found) else FAIL
    d: dict[str, Any] = {"name": "enumerate", "verdict": verdict, "monad": m.label,
                         "size": args.size, "count": len(found), "golden": golden}
    if verdict == FAIL:
        d["witness"] = {"count": len(found), "golden": golden}
    if m.kind in ("F", "P"):
        d["iso"] = _generator_iso(m, X, found)
    if files:
        d["files"] = files
        (Path(args.out) / "manifest.json").write_text(json.dumps(d, indent=2) + "\n")
    return d


def _generator_iso(m, X: FinSet, found: list) -> dict:
    """Name of the partner of each monoid under the F = P generator bijection."""
    other = make_monad("P" if m.kind == "F" else "F", caps=m.caps)
    if m.kind == "F":
        key = lambda c: tuple(c.alpha[x].gen for x in X)  # noqa: E731
        okey = lambda c: tuple(c.alpha[x] for x in X)  # noqa: E731
    else:
        key = lambda c: tuple(c.alpha[x] for x in X)  # noqa: E731
        okey = lambda c: tuple(c.alpha[x].gen for x in X)  # noqa: E731
    names = {okey(c): c.name for c in enumerate_monoids(other, X)}
    return {c.name: names.get(key(c)) for c in found}


def cmd_adjunction(args) -> dict:
    z, x, y = (_load(p, args) for p in (args.z, args.x, args.y))
    try:
        ex = exponential(x, y)
    except NotExponentiable as exc:
        return {"name": "adjunction", "verdict": FAIL, "witness": jsonable(exc.witness)}
    rep = adjunction_count(z, x, y, ex)
    return rep.to_dict(args.timings)


COMMANDS: dict[str, Callable] = {
    "check-laws": cmd_check_laws, "check-monoid": cmd_check_monoid, "hom": cmd_hom,
    "box": cmd_box, "conv": cmd_conv, "expo": cmd_expo, "enumerate": cmd_enumerate,
    "adjunction": cmd_adjunction,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap-tx", type=int, default=None, help="cap on |TX|")
    common.add_argument("--cap-ttx", type=int, default=None, help="cap on |TTX| and |TTTX|")
    common.add_argument("--cap-homs", type=int, default=None, help="cap on hom-set candidates")
    common.add_argument("--mode", default=None, help="checker mode (exhaustive, witness, ...)")
    common.add_argument("--seed", type=int, default=0, help="seed for witness sampling")
    common.add_argument("--timings", action="store_true", help="include timings in the report")

    p = argparse.ArgumentParser(prog="kleislilab", description=__doc__.splitlines()[0])
    p.add_argument("--replay", default=None, help="re-run the invocation stored in a report")
    sub = p.add_subparsers(dest="command")

    def monad_args(sp):
        sp.add_argument("--monad", required=True, choices=["P", "F", "U", "PV"])
        sp.add_argument("--quantale", default=None, help="built-in name or quantale JSON file")
        sp.add_argument("--kappa", default="tensor", choices=["tensor", "cartesian"])

    sp = sub.add_parser("check-laws", parents=[common], help="monad, enrichment and lax laws")
    monad_args(sp)
    sp.add_argument("--size", type=int, required=True)
    sp = sub.add_parser("check-monoid", parents=[common], help="T-monoid axioms of an instance")
    sp.add_argument("instance")
    sp = sub.add_parser("hom", parents=[common], help="enumerate homomorphisms")
    sp.add_argument("source")
    sp.add_argument("target")
    sp = sub.add_parser("box", parents=[common], help="box product of two instances")
    sp.add_argument("left")
    sp.add_argument("right")
    sp = sub.add_parser("conv", parents=[common], help="conv, its closed form and algebra laws")
    sp.add_argument("instance")
    sp.add_argument("--table", action="store_true", help="print conv on all of T[X,V]")
    sp = sub.add_parser("expo", parents=[common], help="decide exponentiability")
    sp.add_argument("instance")
    sp.add_argument("--route", default="all",
                    choices=["criterion", "conv-laws", "couniversal", "all"])
    sp.add_argument("--tests", default=None, help="directory of test-object instances")
    sp = sub.add_parser("enumerate", parents=[common], help="all T-monoids on n points")
    monad_args(sp)
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--out", default=None, help="directory for instance files and manifest")
    sp = sub.add_parser("adjunction", parents=[common], help="|[Z box X, Y]| = |[Z, [X,Y]]|")
    sp.add_argument("z")
    sp.add_argument("x")
    sp.add_argument("y")
    return p


def run(argv: list[str]) -> tuple[int, dict]:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.replay:
        return replay(args.replay)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2, {"name": "usage", "verdict": "usage"}
    try:
        report = COMMANDS[args.command](args)
    except CapExceeded as exc:
        report = {"name": args.command, "verdict": CAP, "witness": str(exc)}
    except HypothesisUnmet as exc:
        report = {"name": args.command, "verdict": UNMET, "witness": str(exc)}
    except (MalformedSurface, MonadMismatch, UnknownName, ModeUnsupported, OSError) as exc:
        return 2, {"name": args.command, "verdict": "usage", "error": str(exc)}
    report["invocation"] = [a for a in argv if a != "--timings"]
    return EXIT.get(report.get("verdict"), 1), report


def replay(path: str) -> tuple[int, dict]:
    try:
        old = json.loads(Path(path).read_text())
        argv = old["invocation"]
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        return 2, {"name": "replay", "verdict": "usage", "error": str(exc)}
    code, new = run(argv)
    canon = lambda w: json.loads(json.dumps(jsonable(w)))  # noqa: E731
    same = new.get("verdict") == old.get("verdict") and canon(new.get("witness")) == old.get("witness")
    return (0 if same else 1), {"name": "replay", "verdict": PASS if same else FAIL,
                                "replayed": old.get("verdict"), "now": new.get("verdict"),
                                "invocation": argv}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        code, report = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0) if exc.code in (0, None) else 2
    print(json.dumps(jsonable(report), indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
