"""Command-line interface: ``pcbpv <command> FILE ...``.

Exit codes: 0 for success or a positive answer, 1 for a negative answer or
a failed check or run, 2 when the input or the invocation is malformed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from importlib import metadata

from . import frontends
from .core import (
    Lam, NEG, POS, Record, Signature, erase_annotations, normalize_signature, polarity_of, validate_type,
    validate_signature,
)
from .dynamics import FoldNu, OutOfFuel, Terminated, WentStuck, erase_signature, evaluate
from .generators import random_lambda_signature
from .inhabit import compute_inhabited
from .parser import (
    GRAMMAR_VERSION, ParseError, parse_computation, parse_lambda_signature, parse_signature,
    parse_type, parse_value, print_comp, print_signature, print_value,
)
from .semantics import Oracle
from .subtype import PolarityMismatch, SubtypeState, format_derivation
from .typecheck import check_signature


class UsageError(Exception):
    pass


def _version() -> str:
    try:
        v = metadata.version("pcbpv")
    except metadata.PackageNotFoundError:
        v = "0.1.0"
    return f"pcbpv {v} (grammar {GRAMMAR_VERSION})"


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}")


def _report(diags) -> None:
    for d in diags:
        where = f"{d.span}: " if d.span else ""
        print(f"{where}{d.message} [{d.rule}]", file=sys.stderr)


def _load(path: str, iso: bool = False) -> Signature:
    sig = parse_signature(_read(path), path)
    diags = frontends.validate_iso(sig) if iso else validate_signature(sig)
    if diags:
        _report(diags)
        raise SystemExit(2)
    return sig


def _load_lambda(path: str) -> Signature:
    sig = parse_lambda_signature(_read(path), path)
    diags = frontends.validate_lambda(sig)
    if diags:
        _report(diags)
        raise SystemExit(2)
    return sig


def _yes(ok: bool) -> int:
    print("yes" if ok else "no")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Commands


def cmd_check(args) -> int:
    sig = _load(args.file, iso=args.iso)
    if args.iso:
        sig = frontends.iso_translate(sig)
    errors = check_signature(sig)
    if args.json:
        print(json.dumps({"ok": not errors, "errors": [e.to_json() for e in errors]}, indent=2))
    else:
        for e in errors:
            print(str(e), file=sys.stderr)
        if not errors:
            print("ok")
    return 1 if errors else 0


def _type_arg(text: str, sig: Signature, polarity=None, iso: bool = False):
    ty = parse_type(text, sig, polarity, file="<argument>")
    problems = validate_type(ty, sig, polarity, iso=iso)
    if problems:
        raise UsageError(f"in type argument {text!r}: {problems[0].message}")
    return ty


def cmd_sub(args) -> int:
    sig = _load(args.file)
    state = SubtypeState(sig, top_before_bot=args.top_before_bot)
    left = _type_arg(args.left, sig)
    right = _type_arg(args.right, sig)
    try:
        if polarity_of(left) != polarity_of(right):
            raise PolarityMismatch("cannot compare a positive type with a negative type")
    except PolarityMismatch as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    a, b = state.intern(left, "sub"), state.intern(right, "sub")
    if args.explain:
        ok, d = state.explain(a, b)
        print("yes" if ok else "no")
        if ok:
            print(format_derivation(d))
        return 0 if ok else 1
    return _yes(state.sub(a, b))


def _name_of(sig: Signature, text: str, polarity: str, what: str) -> str:
    d = sig.types.get(text)
    if d is None:
        raise UsageError(f"{text} is not a defined type name")
    if d.polarity != polarity:
        raise UsageError(f"{text} is not a {what} type name")
    return text


def cmd_empty(args) -> int:
    sig = _load(args.file)
    name = _name_of(sig, args.name, POS, "positive")
    state = SubtypeState(sig)
    table = state.table
    if table.is_empty(name):
        print("yes")
        return 0
    print(f"no (inhabited by {print_value(table.witness(name))})")
    return 1


def cmd_full(args) -> int:
    sig = _load(args.file)
    name = _name_of(sig, args.name, NEG, "negative")
    return _yes(compute_inhabited(normalize_signature(sig)).is_full(name))


def _show_result(e) -> str:
    if isinstance(e, Lam):
        return "<fn>"
    if isinstance(e, Record):
        return "<record{" + ",".join(l for l, _ in e.fields) + "}>"
    if isinstance(e, FoldNu):
        return "<fold>"
    return print_comp(e)


def cmd_run(args) -> int:
    sig = _load(args.file, iso=args.iso)
    if (args.name is None) == (args.expr is None):
        raise UsageError("give either a definition name or --expr")
    if args.expr is not None:
        e = parse_computation(args.expr, sig, file="<expr>")
    else:
        d = sig.defs.get(args.name)
        if d is None:
            raise UsageError(f"{args.name} is not a defined expression name")
        e = d.body
    e = erase_annotations(e)
    run_sig = erase_signature(sig)
    hook = (lambda c: print(print_comp(c))) if args.trace else None
    r = evaluate(e, run_sig, fuel=args.fuel, iso=args.iso, on_step=hook)
    if isinstance(r, Terminated):
        if not args.trace:
            print(_show_result(r.final))
        if args.steps:
            print(f"steps: {r.steps}")
        return 0
    if isinstance(r, OutOfFuel):
        print(f"out of fuel after {r.steps} steps", file=sys.stderr)
        return 1
    assert isinstance(r, WentStuck)
    print(f"stuck after {r.steps} steps: {r.reason}: {print_comp(r.at)}", file=sys.stderr)
    return 1


def cmd_norm(args) -> int:
    sig = _load(args.file)
    sys.stdout.write(print_signature(normalize_signature(sig)))
    return 0


def cmd_translate(args) -> int:
    if args.iso:
        sig = _load(args.file, iso=True)
        out = frontends.iso_translate(sig, fold=not args.no_fold)
        if args.normalize:
            out = normalize_signature(out)
    else:
        sig = _load_lambda(args.file)
        tr = frontends.cbn_translate if args.cbn else frontends.cbv_translate
        out = tr(sig, normalize=not args.no_normalize)
    sys.stdout.write(print_signature(out))
    return 0


def cmd_oracle(args) -> int:
    sig = _load(args.file, iso=args.iso)
    oracle = Oracle(sig, depth=args.depth, iso=args.iso,
                    arrow_mode="literal" if args.literal else "shortcut")
    if args.value is not None:
        if args.vtype is None:
            raise UsageError("--value needs --vtype")
        v = parse_value(args.value, sig, file="<value>")
        verdict = oracle.value(v, _type_arg(args.vtype, sig, POS, iso=args.iso), args.k)
    else:
        if args.define is not None:
            d = sig.defs.get(args.define)
            if d is None:
                raise UsageError(f"{args.define} is not a defined expression name")
            e, default = d.body, d.type
        elif args.expr is not None:
            e, default = parse_computation(args.expr, sig, file="<expr>"), None
        else:
            raise UsageError("give one of --def, --expr or --value")
        ty = _type_arg(args.type, sig, NEG, iso=args.iso) if args.type is not None else default
        if ty is None:
            raise UsageError("--type is required with --expr")
        verdict = oracle.comp(e, ty, args.k)
    print(str(verdict))
    return 0 if verdict.holds else 1


def cmd_xcheck(args) -> int:
    mode = "cbn" if args.cbn else "cbv"
    if args.random:
        rng = random.Random(args.seed)
        sigs = [(f"seed {args.seed} #{i}", random_lambda_signature(rng)) for i in range(args.random)]
    elif args.file:
        sigs = [(args.file, _load_lambda(args.file))]
    else:
        raise UsageError("give a FILE or --random N")
    bad = 0
    pairs = 0
    for label, sig in sigs:
        n = len([1 for it in sig.items if it.__class__.__name__ == "TypeDef"])
        pairs += n * n
        for d in frontends.xcheck(sig, mode):
            bad += 1
            print(f"{label}: {d}")
            if args.random:
                sys.stdout.write(print_signature(sig))
    if bad:
        print(f"{bad} disagreement(s)")
        return 1
    print(f"agree ({pairs} pairs, {len(sigs)} signature(s))")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pcbpv", description="Polarized call-by-push-value toolkit.")
    p.add_argument("--version", action="version", version=_version())
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    c = sub.add_parser("check", help="typecheck every definition")
    c.add_argument("file")
    c.add_argument("--json", action="store_true", help="machine-readable diagnostics on stdout")
    c.add_argument("--iso", action="store_true", help="isorecursive input (checked after translation)")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("sub", help="decide subtyping between two types")
    c.add_argument("file")
    c.add_argument("left")
    c.add_argument("right")
    c.add_argument("--explain", action="store_true", help="print the circular derivation")
    c.add_argument("--top-before-bot", action="store_true", help="try the top rule before bottom")
    c.set_defaults(func=cmd_sub)

    c = sub.add_parser("empty", help="is a positive type name empty?")
    c.add_argument("file")
    c.add_argument("name")
    c.set_defaults(func=cmd_empty)

    c = sub.add_parser("full", help="is a negative type name full?")
    c.add_argument("file")
    c.add_argument("name")
    c.set_defaults(func=cmd_full)

    c = sub.add_parser("run", help="evaluate a definition or expression")
    c.add_argument("file")
    c.add_argument("name", nargs="?")
    c.add_argument("--expr", help="evaluate this computation instead of a definition")
    c.add_argument("--fuel", type=int, default=100000, help="step limit, 0 for none (default 100000)")
    c.add_argument("--trace", action="store_true", help="print every intermediate computation")
    c.add_argument("--steps", action="store_true", help="print the number of steps taken")
    c.add_argument("--iso", action="store_true", help="isorecursive dynamics")
    c.set_defaults(func=cmd_run)

    c = sub.add_parser("norm", help="print the normalized signature")
    c.add_argument("file")
    c.set_defaults(func=cmd_norm)

    c = sub.add_parser("translate", help="translate iso/call-by-name/call-by-value input")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--iso", action="store_true")
    g.add_argument("--cbn", action="store_true")
    g.add_argument("--cbv", action="store_true")
    c.add_argument("file")
    c.add_argument("--no-fold", action="store_true", help="iso: map recursive types to names without fold labels")
    c.add_argument("--normalize", action="store_true", help="iso: normalize the output")
    c.add_argument("--no-normalize", action="store_true", help="cbn/cbv: print before normalization")
    c.set_defaults(func=cmd_translate)

    c = sub.add_parser("oracle", help="bounded semantic typing")
    c.add_argument("file")
    w = c.add_mutually_exclusive_group(required=True)
    w.add_argument("--def", dest="define", metavar="F")
    w.add_argument("--expr", metavar="E")
    w.add_argument("--value", metavar="V")
    c.add_argument("--vtype", metavar="T", help="positive type for --value")
    c.add_argument("--type", metavar="S", help="negative type (default: the definition's type)")
    c.add_argument("--k", type=int, default=20, help="step index (default 20)")
    c.add_argument("--depth", type=int, default=4, help="enumeration depth (default 4)")
    c.add_argument("--literal", action="store_true", help="quantify over every smaller index")
    c.add_argument("--iso", action="store_true", help="isorecursive input")
    c.set_defaults(func=cmd_oracle)

    c = sub.add_parser("xcheck", help="compare source and translated subtyping")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--cbn", action="store_true")
    g.add_argument("--cbv", action="store_true")
    c.add_argument("file", nargs="?")
    c.add_argument("--random", type=int, default=0, metavar="N", help="check N generated signatures")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_xcheck)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as err:
        print(str(err), file=sys.stderr)
        return 2
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except SystemExit as ex:
        return int(ex.code or 0)


if __name__ == "__main__":
    sys.exit(main())
