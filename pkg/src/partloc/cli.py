"""Command-line front end.

Exit codes: 0 when everything checked passes, 1 on a failed check, 2 on a
configuration or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import recipes
from .errors import ConfigError, ConstructionError, ContractError, InputError, UnsupportedInputError
from .fusion import classify_subgroup
from .locality import Locality, fusion_of_locality, verify_locality
from .partial_group import check_axioms
from .products import recognize_internal_product
from .suite import SuiteConfig, report, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

# --classify letters to subgroup flags
FLAGS = {"cr": "centric_radical", "s": "subcentric", "c": "centric", "f": "fully_normalized", "r": "radical"}


def _budget_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-word-len", type=int, default=4)
    p.add_argument("--budget", type=int, default=10_000_000)
    p.add_argument("--seed", type=int, default=42)


def _format_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "machine"), default="table")
    p.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="partloc", description="Finite partial groups, localities and fusion systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check the partial group axioms and locality axioms")
    v.add_argument("--input", required=True, help="locality recipe: file, inline JSON or instance id")
    _budget_args(v)
    _format_arg(v)

    pr = sub.add_parser("product", help="build a direct or central product and save its recipe")
    pr.add_argument("kind", choices=("direct", "central"))
    pr.add_argument("--lhs", required=True)
    pr.add_argument("--rhs", required=True)
    pr.add_argument("--center", help='central subgroup generators as "[[i,j],...]"')
    pr.add_argument("--out", help="recipe file to write (stdout if omitted)")
    _budget_args(pr)

    r = sub.add_parser("recognize", help="decide whether L is an internal direct or central product")
    r.add_argument("--ambient", required=True)
    r.add_argument("--sub1", required=True, help="hat1|hat2|image1|image2, file or inline JSON")
    r.add_argument("--sub2", required=True)
    r.add_argument("--max-word-len", type=int, default=3, help="word length for the C1/C2 checks")
    r.add_argument("--budget", type=int, default=2_000_000)
    _format_arg(r)

    f = sub.add_parser("fusion", help="classify the subgroups of S in the fusion system of L")
    f.add_argument("--input", required=True)
    f.add_argument("--classify", default="cr,s,c,f", help="comma list of cr,s,c,f,r")
    _format_arg(f)

    s = sub.add_parser("lemma-suite", help="run the brute-force lemma checks")
    s.add_argument("--only", action="append", help="lemma id or Lemma@instance (repeatable, comma lists allowed)")
    s.add_argument("--corrupt", action="append", default=[], help="instance id to replace by a corrupted fixture")
    s.add_argument("--workers", type=int, default=1)
    _budget_args(s)
    _format_arg(s)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n"


def _load(text: str) -> tuple[dict, Locality]:
    recipe = recipes.resolve(recipes.read_recipe(text))
    return recipe, recipes.build_locality(recipe)


def cmd_verify(args) -> int:
    _, loc = _load(args.input)
    ax = check_axioms(loc.pg, args.max_word_len, args.budget, args.seed)
    rep = verify_locality(loc, args.max_word_len, args.budget, args.seed)
    ok = ax.passed and rep.passed
    if args.format == "machine":
        text = _dump({"status": "pass" if ok else "fail", "axioms": ax.to_dict(), "locality": rep.to_dict()})
    else:
        lines = [
            f"partial group  |L| = {loc.pg.n}, |S| = {len(loc.S)}, |Δ| = {len(loc.delta)}, p = {loc.p}",
            f"axioms         {ax.status}  ({ax.checked_words} words, {'exhaustive' if ax.exhaustive else 'sampled'})",
            f"objects        {'fail  ' + '; '.join(rep.structure) if rep.structure else 'pass'}",
            f"L1             {'fail' if rep.l1 else 'pass'}",
            f"L2             {rep.l2.status}  ({rep.l2.checked_words} words)",
            f"L3             {'fail' if rep.l3 else 'pass'}",
            f"locality       {'pass' if ok else 'fail'}",
        ]
        for axiom, w in ax.violations[:5]:
            lines.append(f"  axiom {axiom} fails on {w}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_product(args) -> int:
    recipe = {"kind": args.kind, "lhs": recipes.read_recipe(args.lhs), "rhs": recipes.read_recipe(args.rhs)}
    if args.kind == "central":
        if not args.center:
            raise ConfigError("product central needs --center")
        try:
            recipe["center"] = json.loads(args.center)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--center is not valid JSON ({exc})") from exc
    elif args.center:
        raise ConfigError("--center only applies to central products")
    recipe = recipes.resolve(recipe)
    try:
        loc = recipes.build_locality(recipe, verify=True, max_len=args.max_word_len, budget=args.budget, seed=args.seed)
    except ConstructionError as exc:
        sys.stderr.write(f"construction failed verification: {exc}\n")
        return EXIT_FAIL
    _emit(recipes.dump_recipe(recipe), args.out)
    sys.stderr.write(f"{args.kind} product: |L| = {loc.pg.n}, |S| = {len(loc.S)}, |Δ| = {len(loc.delta)}\n")
    return EXIT_PASS


def cmd_recognize(args) -> int:
    _, loc = _load(args.ambient)
    a = recipes.read_sublocality(loc, args.sub1)
    b = recipes.read_sublocality(loc, args.sub2)
    rep = recognize_internal_product(loc, a, b, c_check_len=args.max_word_len, budget=args.budget)
    d = rep.to_dict()
    if args.format == "machine":
        text = _dump(d)
    else:
        text = "".join(f"{k:<18} {v}\n" for k, v in d.items())
    _emit(text, args.out)
    return EXIT_PASS if rep.verdict != "none" else EXIT_FAIL


def cmd_fusion(args) -> int:
    letters = [x.strip() for x in args.classify.split(",") if x.strip()]
    bad = [x for x in letters if x not in FLAGS]
    if bad:
        raise ConfigError(f"unknown --classify letters {bad}; use {sorted(FLAGS)}")
    _, loc = _load(args.input)
    F = fusion_of_locality(loc)
    rows = []
    for P in F.subgroups:
        flags = classify_subgroup(F, P).flags()
        members = sorted(loc.from_s_mask(P))
        rows.append({"subgroup": members, "order": len(members), **{x: flags[FLAGS[x]] for x in letters}})
    rows.sort(key=lambda r: (r["order"], r["subgroup"]))
    if args.format == "machine":
        text = "".join(_dump(r) for r in rows)
    else:
        head = f"{'order':>5}  " + "  ".join(f"{x:>3}" for x in letters) + "  subgroup"
        lines = [head]
        for r in rows:
            marks = "  ".join(f"{'y' if r[x] else '.':>3}" for x in letters)
            lines.append(f"{r['order']:>5}  {marks}  {r['subgroup']}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_PASS


def cmd_lemma_suite(args) -> int:
    only = None
    if args.only:
        only = [x.strip() for item in args.only for x in item.split(",") if x.strip()]
    cfg = SuiteConfig(
        seed=args.seed,
        budget=args.budget,
        max_len=args.max_word_len,
        only=only,
        corrupt=args.corrupt,
        workers=args.workers,
    )
    records = run_suite(cfg)
    _emit(report(records, args.format), args.out)
    return EXIT_FAIL if any(r.status == "fail" for r in records) else EXIT_PASS


COMMANDS = {
    "verify": cmd_verify,
    "product": cmd_product,
    "recognize": cmd_recognize,
    "fusion": cmd_fusion,
    "lemma-suite": cmd_lemma_suite,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, InputError, UnsupportedInputError, ContractError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
