"""``isotower`` command line: ``verify``, ``koszul`` and ``degree``."""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import builtins as bmaps
from . import ktheory
from .errors import IsotowerError, UsageError
from .facial import degree_on_diagonal
from .harness import SUITES, SuiteConfig, run_suite

CONFIG_KEYS = ("suite", "d0", "d1", "k_range", "group", "trials", "seed", "tol")


def parse_group(text: str) -> List[int]:
    """``"2x3"`` to ``[2, 3]``."""
    try:
        orders = [int(p) for p in text.lower().split("x")]
    except ValueError as exc:
        raise UsageError(f"bad group {text!r}; expected e.g. 2x3") from exc
    if not orders or any(n < 1 for n in orders):
        raise UsageError(f"bad group {text!r}; orders must be positive")
    return orders


def parse_chars(text: str, n: int) -> list:
    """``"0,1;1,0"`` to ``[(0, 1), (1, 0)]``; the empty string is the zero representation."""
    text = text.strip()
    if not text:
        return []
    out = []
    for part in text.split(";"):
        try:
            c = tuple(int(v) for v in part.split(","))
        except ValueError as exc:
            raise UsageError(f"bad character {part!r}") from exc
        if len(c) != n:
            raise UsageError(f"character {part!r} needs {n} entries")
        out.append(c)
    return out


def parse_tol(items: Optional[List[str]]) -> dict:
    out = {}
    for item in items or []:
        name, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects name=value, got {item!r}")
        try:
            out[name.strip()] = float(val)
        except ValueError as exc:
            raise UsageError(f"bad tolerance value in {item!r}") from exc
    return out


def parse_k_range(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --k {text!r}; expected e.g. 1,2") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isotower", description="Verify tower constructions numerically and exactly.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=sorted(SUITES) + ["all"])
    v.add_argument("--d0", type=int)
    v.add_argument("--d1", type=int)
    v.add_argument("--k", dest="k_range", help="comma separated levels, e.g. 1,2")
    v.add_argument("--group", help="group orders, e.g. 2x3")
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--tol", action="append", metavar="NAME=VAL",
                   help="tolerance override; 'all' overrides every tolerance")
    v.add_argument("--config", help="JSON file mirroring these flags; flags win")
    v.add_argument("--out", help="write the JSON report here")

    k = sub.add_parser("koszul", help="Koszul complex of the residue sequence")
    k.add_argument("--group", required=True, help="group orders, e.g. 2x3")
    k.add_argument("--v0", required=True, help="characters, e.g. '0,1;1,0'")
    k.add_argument("--v1", required=True, help="characters, e.g. '0,0;1,2'")
    k.add_argument("--json", action="store_true", help="print the report as JSON")

    d = sub.add_parser("degree", help="degree of a builtin facial map on the diagonal")
    d.add_argument("--map", required=True, choices=sorted(bmaps.BUILTIN_MAPS))
    d.add_argument("--d", type=int, help="model dimension for maps that take one")
    return ap


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    unknown = set(data) - set(CONFIG_KEYS)
    if unknown:
        raise UsageError(f"unknown config keys {sorted(unknown)}")
    return data


def cmd_verify(args) -> int:
    conf = _load_config(args.config)
    flags = {
        "suite": args.suite,
        "d0": args.d0,
        "d1": args.d1,
        "k_range": parse_k_range(args.k_range) if args.k_range else None,
        "group": parse_group(args.group) if args.group else None,
        "trials": args.trials,
        "seed": args.seed,
    }
    merged = {**conf, **{key: val for key, val in flags.items() if val is not None}}
    tol = dict(conf.get("tol") or {})
    tol.update(parse_tol(args.tol))
    if isinstance(merged.get("group"), str):
        merged["group"] = parse_group(merged["group"])
    suite = merged.pop("suite", "all")
    merged.pop("tol", None)
    cfg = SuiteConfig(tol=tol, **merged)
    report = run_suite(suite, cfg)
    text = report.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    for rec in report.to_dict()["checks"]:
        print(f"{rec['status'].upper():4s} {rec['id']}")
    s = report.summary
    print(f"summary: {s['pass']} pass, {s['fail']} fail, {s['skip']} skip")
    return 0 if report.ok else 1


def cmd_koszul(args) -> int:
    orders = parse_group(args.group)
    G = ktheory.GroupSpec(tuple(orders))
    V0 = ktheory.Representation(G, tuple(parse_chars(args.v0, len(orders))))
    V1 = ktheory.Representation(G, tuple(parse_chars(args.v1, len(orders))))
    if not V1.dim >= V0.dim >= 1:
        raise UsageError("need dim V1 >= dim V0 >= 1")
    K, rep = ktheory.tower_koszul(V0, V1)
    if args.json:
        print(json.dumps({"report": rep, "complex": K.to_json()}, indent=2, sort_keys=True))
        return 0
    print(f"group: Z/{' x Z/'.join(map(str, orders))}  characters: {[list(c) for c in G.chars()]}")
    for j, x in enumerate(rep["x"]):
        print(f"x_{j} = {x}")
    for i, D in enumerate(K.differentials, start=1):
        print(f"d_{i} ({len(D)}x{len(D[0]) if D else 0}):")
        for row in D:
            print("  [" + ", ".join(repr(e) for e in row) + "]")
    print(f"d^2 = 0: {rep['d_squared_zero']}")
    print(f"all differentials zero: {rep['all_zero']}")
    print(f"V0 is a subrepresentation of V1: {rep['is_subrep']}")
    print(f"residue convention: {rep['residue_convention']}")
    return 0


def cmd_degree(args) -> int:
    f = bmaps.builtin_map(args.map, args.d)
    deg = degree_on_diagonal(f)
    print(f"{args.map}: degree {deg} (expected {bmaps.EXPECTED_DEGREES[args.map]})")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return {"verify": cmd_verify, "koszul": cmd_koszul, "degree": cmd_degree}[args.command](args)
    except UsageError as exc:
        print(f"isotower: error: {exc}", file=sys.stderr)
        return 2
    except IsotowerError as exc:
        print(f"isotower: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
