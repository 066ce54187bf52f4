"""Command-line front end.

Exit codes: 0 on success or agreement, 1 when a disagreement, a distinction
or a false verdict is reported, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import harness
from .enumeration import EnumerationBudgetError, enumerate_class, random_structure
from .homs import compare_profiles, count_homs
from .logic import LANGUAGE_IDS, FormulaError, ParseError, check, equivalent, parse
from .semiring import BUILTIN, element_text, parse_semiring
from .structures import (
    ClassKind,
    ClassTag,
    Signature,
    StructureError,
    classify,
    dumps,
    from_json,
    to_dot,
)
from .transforms import (
    backward_expansion,
    down_transform,
    flip,
    global_expansion,
    gsub,
    pg_augment,
    rg_connect,
    unravel,
)

TRANSFORMS = ("unravel", "gsub", "backexp", "globexp", "down", "flip", "pgaug", "rgconnect")
CLASS_KINDS = tuple(k.value for k in ClassKind)


class UsageError(Exception):
    pass


def _read(path: str):
    try:
        if path == "-":
            return from_json(json.load(sys.stdin))
        with open(path) as fh:
            return from_json(json.load(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None
    except StructureError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _semiring(text: str):
    try:
        return parse_semiring(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _tag(kind: str, depth: Optional[int]) -> ClassTag:
    return ClassTag(ClassKind(kind), depth)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, default=str))


# ---------------------------------------------------------------------------
# subcommands


def cmd_classify(args) -> int:
    M = _read(args.input)
    info = classify(M)
    _emit(
        {
            "kinds": sorted(k.value for k in info.kinds),
            "directedDepth": info.directed_depth,
            "pathDepth": info.path_depth,
            "forestDepth": info.forest_depth,
            "states": M.n,
        }
    )
    return 0


def cmd_transform(args) -> int:
    M = _read(args.input)
    op = args.op
    if op == "unravel":
        if args.k is None:
            raise UsageError("transform unravel needs --k")
        out = unravel(M, args.k)
    elif op == "gsub":
        out = gsub(M, args.k)
    elif op == "backexp":
        out = backward_expansion(M)
    elif op == "globexp":
        out = global_expansion(M)
    elif op == "down":
        out = down_transform(M)
    elif op == "flip":
        out = flip(M)
    elif op == "pgaug":
        out = pg_augment(M)
    else:
        out = rg_connect(M)
    print(to_dot(out) if args.dot else dumps(out))
    return 0


def cmd_hom_count(args) -> int:
    S = _semiring(args.semiring)
    T, M = _read(args.source), _read(args.target)
    print(element_text(count_homs(S, T, M)))
    return 0


def cmd_profile_compare(args) -> int:
    S = _semiring(args.semiring)
    M, N = _read(args.left), _read(args.right)
    verdict = compare_profiles(M, N, _tag(args.cls, args.depth), S, (args.max_states, args.depth))
    _emit(verdict.as_dict())
    return 0 if verdict.equal else 1


def cmd_check(args) -> int:
    M = _read(args.input)
    phi = parse(args.formula, M.signature)
    state = M.distinguished if args.state is None else args.state
    if not 0 <= state < M.n:
        raise UsageError(f"state {state} is out of range")
    holds = check(M, {}, phi, state)
    print("true" if holds else "false")
    return 0 if holds else 1


def cmd_equiv(args) -> int:
    M, N = _read(args.left), _read(args.right)
    same = equivalent(M, N, args.logic, args.k)
    print("equivalent" if same else "not equivalent")
    return 0 if same else 1


def cmd_enumerate(args) -> int:
    props = tuple(args.props.split(",")) if args.props else ()
    actions = tuple(args.actions.split(",")) if args.actions else ()
    sig = Signature(props, actions)
    tag = _tag(args.cls, args.depth)
    if args.random:
        for i in range(args.random):
            print(dumps(random_structure(tag, sig, args.max_states, args.seed + i)))
        return 0
    for M in enumerate_class(tag, sig, args.max_states, args.depth):
        print(dumps(M))
    return 0


def cmd_verify(args) -> int:
    bounds = {"max_states": args.max_states, "pairs": args.pairs, "corpus": args.corpus}
    if args.k is not None:
        bounds["k"] = tuple(args.k)
    report = harness.verify_theorem(args.theorem, bounds, args.seed)
    print(report.to_json() if args.json else report.text())
    return 0 if report.ok else 1


def cmd_negative_demo(args) -> int:
    report = harness.negative_demo(_semiring(args.semiring))
    print(json.dumps(report, indent=2, sort_keys=True, default=str) if args.json else harness.negative_demo_text(report))
    return 0 if report["ok"] else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="homprofile", description="Homomorphism profiles of labeled transition systems.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="report class membership and depths")
    c.add_argument("--in", dest="input", required=True, help="structure JSON ('-' for stdin)")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("transform", help="apply a structure transformation")
    c.add_argument("op", choices=TRANSFORMS)
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--k", type=int, help="depth for unravel (required) and gsub (optional)")
    c.add_argument("--dot", action="store_true", help="print Graphviz DOT instead of JSON")
    c.set_defaults(func=cmd_transform)

    c = sub.add_parser("hom-count", help="count homomorphisms in a semiring")
    c.add_argument("--source", required=True)
    c.add_argument("--target", required=True)
    c.add_argument("--semiring", default="nat", help=f"one of {', '.join(BUILTIN)} (any modp:<p>, minplus:<cap>)")
    c.set_defaults(func=cmd_hom_count)

    c = sub.add_parser("profile-compare", help="compare left profiles over an enumerated class slice")
    c.add_argument("--left", required=True)
    c.add_argument("--right", required=True)
    c.add_argument("--class", dest="cls", choices=CLASS_KINDS, default="tree")
    c.add_argument("--max-states", type=int, default=3)
    c.add_argument("--max-depth", "--depth", dest="depth", type=int)
    c.add_argument("--semiring", default="nat")
    c.set_defaults(func=cmd_profile_compare)

    c = sub.add_parser("check", help="model-check a formula at a state")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--formula", required=True)
    c.add_argument("--state", type=int)
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("equiv", help="decide logical equivalence of two pointed structures")
    c.add_argument("--logic", required=True, choices=LANGUAGE_IDS)
    c.add_argument("--left", required=True)
    c.add_argument("--right", required=True)
    c.add_argument("--k", type=int, help="depth bound for the depth-indexed languages")
    c.set_defaults(func=cmd_equiv)

    c = sub.add_parser("enumerate", help="print a class slice as JSON lines")
    c.add_argument("--class", dest="cls", choices=CLASS_KINDS, default="tree")
    c.add_argument("--max-states", type=int, default=3)
    c.add_argument("--max-depth", "--depth", dest="depth", type=int)
    c.add_argument("--props", default="p", help="comma-separated proposition names")
    c.add_argument("--actions", default="R", help="comma-separated action names")
    c.add_argument("--random", type=int, default=0, help="emit this many random members with exactly --max-states states")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("verify", help="run a theorem experiment")
    c.add_argument("--theorem", required=True, choices=harness.THEOREMS)
    c.add_argument("--max-states", type=int, default=3)
    c.add_argument("--k", type=int, nargs="+", help="depth bounds for the depth-indexed theorems")
    c.add_argument("--pairs", type=int, default=harness.DEFAULT_BOUNDS["pairs"], help="pairs per random run")
    c.add_argument("--corpus", choices=("exhaustive", "figure3", "random"), default="exhaustive")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("negative-demo", help="reproduce the negative-result ingredients for a semiring")
    c.add_argument("--semiring", required=True)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_negative_demo)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ParseError, StructureError, FormulaError, EnumerationBudgetError, harness.HarnessError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
