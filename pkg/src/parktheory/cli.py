"""Command-line front end.

Exit status is 0 when everything holds (or terms are equivalent), 1 on a
semantic negative (a counterexample, inequivalent terms) and 2 on any
operational problem: bad usage, unreadable or malformed input, exhausted
budgets.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .axioms import catalog, check_schema, lookup
from .backends import LatticeModel, TreeModel
from .errors import ParkError, ParseError
from .lattice import DEFAULT_TABLE_BUDGET, Lattice, parse_lattice
from .montheory import Morphism
from .terms import (Interpretation, Signature, evaluate, format_term, parse_signature,
                    parse_term, sort_of, to_dagger_form, to_star_form)
from .treelang import morphisms as tm
from .treelang import nfta as na
from .treelang.trees import parse_tree, tree_str

OK, NEGATIVE, FAILURE = 0, 1, 2


class UsageError(Exception):
    """Operational problem reported with exit status 2."""


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from None


def _load_lattices(args) -> list[Lattice]:
    out = []
    for path in args.lattice or []:
        try:
            out.append(parse_lattice(_read(path), args.budget_table))
        except ParkError as e:
            raise UsageError(f"{path}: {e}") from None
    return out


def _load_sig(args, required: bool = False) -> Signature:
    if args.sig is None:
        if required:
            raise UsageError("--sig is required for the tree backend")
        return Signature()
    try:
        return parse_signature(_read(args.sig))
    except ParkError as e:
        raise UsageError(f"{args.sig}: {e}") from None


def _load_term(path: str, sig: Signature):
    try:
        return parse_term(_read(path), sig)
    except ParkError as e:
        raise UsageError(f"{path}: {e}") from None


def _tree_model(sig: Signature, args) -> TreeModel:
    if sig.alphabet is None or not sig.alphabet.symbols:
        raise UsageError("the tree backend needs 'symbol' lines in the signature file")
    return TreeModel(sig.alphabet)


# -- bindings ---------------------------------------------------------------------


def parse_lattice_bindings(text: str, sig: Signature, lattice: Lattice) -> dict:
    """Rows ``<letter> <args ...> -> <values ...>``; every point must be listed once."""
    rows: dict[str, dict] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ParseError("expected '<letter> <args> -> <values>'", lineno)
        left, right = line.split("->", 1)
        words, values = left.split(), tuple(right.split())
        if not words:
            raise ParseError("missing letter name", lineno)
        name, point = words[0], tuple(words[1:])
        if name not in sig:
            raise ParseError(f"letter {name!r} is not declared", lineno)
        n, p = sig.sort(name)
        if len(point) != p or len(values) != n:
            raise ParseError(f"letter {name} is {n} -> {p}: expected {p} arguments "
                             f"and {n} values", lineno)
        for e in point + values:
            if e not in lattice.elements:
                raise ParseError(f"unknown element {e!r}", lineno)
        table = rows.setdefault(name, {})
        if point in table:
            raise ParseError(f"row {' '.join(point) or '()'} of {name} given twice", lineno)
        table[point] = values
    out = {}
    for name, table in rows.items():
        n, p = sig.sort(name)
        missing = [pt for pt in _points(lattice, p) if pt not in table]
        if missing:
            raise ParseError(f"letter {name}: no row for {' '.join(missing[0]) or '()'}")
        try:
            out[name] = Morphism.from_function(lattice, n, p, lambda *xs: table[xs])
        except ValueError as e:
            raise ParseError(f"letter {name}: {e}") from None
    return out


def _points(lattice: Lattice, p: int):
    return [tuple(lattice.elements[c] for c in pt) for pt in lattice.points(p)]


def parse_tree_bindings(text: str, sig: Signature, model: TreeModel, base: dict) -> dict:
    """Lines ``<letter> = {tree, ...}`` (a finite language) or ``<letter> = <term>``.

    Terms may use the atoms and any letter bound on an earlier line.
    """
    values = dict(base)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected '<letter> = <language or term>'", lineno)
        name, rhs = (s.strip() for s in line.split("=", 1))
        if name not in sig:
            raise ParseError(f"letter {name!r} is not declared", lineno)
        n, p = sig.sort(name)
        if rhs.startswith("{"):
            if not rhs.endswith("}"):
                raise ParseError("unterminated '{'", lineno)
            if n != 1:
                raise ParseError(f"a finite language is a morphism 1 -> p, {name} is "
                                 f"{n} -> {p}", lineno)
            items = [s for s in _split_top(rhs[1:-1]) if s.strip()]
            try:
                trees = [parse_tree(s, model.alphabet, p) for s in items]
            except ParkError as e:
                raise ParseError(f"{name}: {e}", lineno) from None
            values[name] = tm.language(trees, p, model.alphabet)
        else:
            try:
                term = parse_term(rhs, sig)
                if sort_of(term, sig) != (n, p):
                    s = sort_of(term, sig)
                    raise ParseError(f"{name} is {n} -> {p} but the term is {s[0]} -> {s[1]}")
                values[name] = evaluate(term, Interpretation(model, sig, values))
            except ParkError as e:
                raise ParseError(f"{name}: {e}", lineno) from None
    return values


def _split_top(text: str) -> list[str]:
    """Split on commas that are not inside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
            continue
        depth += (ch == "(") - (ch == ")")
        cur.append(ch)
    out.append("".join(cur))
    return out


# -- subcommands ------------------------------------------------------------------


def run_catalog(args) -> int:
    for s in catalog():
        sorts = s.sorts_text()
        print(f"{s.id:<13} {s.relation:<2} {s.group:<12} {s.formula()}"
              + (f"   [{sorts}]" if sorts else ""))
    return OK


def _schemas(args):
    if not args.schema:
        return catalog()
    try:
        return [lookup(x) for x in args.schema]
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None


def run_check_axioms(args) -> int:
    schemas = _schemas(args)
    backends = []
    if args.backend == "tree":
        sig = _load_sig(args, required=True)
        backends.append(_tree_model(sig, args))
    else:
        lattices = _load_lattices(args)
        if not lattices:
            raise UsageError("check-axioms needs --lattice (or --backend tree with --sig)")
        backends = [LatticeModel(L) for L in lattices]
    options = dict(exhaustive=args.samples is None, samples=args.samples or 1000,
                   seed=args.seed, max_arity=args.max_arity)
    status = OK
    over_budget = []
    for backend in backends:
        for schema in schemas:
            report = check_schema(schema, backend, **options)
            print(report.summary())
            if report.counterexample is not None:
                print(report.counterexample.describe(backend))
                status = NEGATIVE
            elif report.assignments and all(a.mode == "skipped" for a in report.assignments):
                over_budget.append(f"{schema.id} on {backend.name}")
    if over_budget and status == OK:
        print("every arity assignment exceeded the budget for: " + ", ".join(over_budget),
              file=sys.stderr)
        return FAILURE
    return status


def _interpretation(args, sig: Signature):
    if args.backend == "tree":
        model = _tree_model(sig, args)
        values = model.atoms(sig)
        if args.bind:
            values = parse_tree_bindings(_read(args.bind), sig, model, values)
        return Interpretation(model, sig, values)
    lattices = _load_lattices(args)
    if len(lattices) != 1:
        raise UsageError("the lattice backend needs exactly one --lattice")
    model = LatticeModel(lattices[0])
    values = {}
    if args.bind:
        values = parse_lattice_bindings(_read(args.bind), sig, lattices[0])
    return Interpretation(model, sig, values)


def run_eval(args) -> int:
    sig = _load_sig(args, required=args.backend == "tree")
    term = _load_term(args.term, sig)
    interp = _interpretation(args, sig)
    try:
        value = evaluate(term, interp)
    except ParkError as e:
        raise UsageError(str(e)) from None
    print(interp.backend.show(value))
    return OK


def run_equiv(args) -> int:
    sig = _load_sig(args, required=True)
    args.backend = "tree"
    left, right = _load_term(args.left, sig), _load_term(args.right, sig)
    ls, rs = sort_of(left, sig), sort_of(right, sig)
    if ls != rs:
        raise UsageError(f"the terms have different sorts: {ls[0]} -> {ls[1]} "
                         f"and {rs[0]} -> {rs[1]}")
    interp = _interpretation(args, sig)
    try:
        lv, rv = evaluate(left, interp), evaluate(right, interp)
        found = tm.separating_tree(lv, rv)
    except ParkError as e:
        raise UsageError(str(e)) from None
    if found is None:
        print("equivalent")
        return OK
    k, tree, side = found
    if lv.accepts(k, tree) == rv.accepts(k, tree):
        raise ParkError(f"separating tree {tree_str(tree)} failed the membership recheck")
    print(f"inequivalent: component {k + 1}: {tree_str(tree)} is only in the {side} term")
    return NEGATIVE


def run_translate(args) -> int:
    sig = _load_sig(args)
    term = _load_term(args.term, sig)
    out = to_star_form(term) if args.direction == "to-star" else to_dagger_form(term)
    print(format_term(out))
    return OK


# -- argument parsing -------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lattice", action="append", metavar="FILE",
                   help="lattice file; repeat to check several lattices")
    p.add_argument("--sig", metavar="FILE", help="signature file (symbols and letters)")
    p.add_argument("--backend", choices=("lattice", "tree"), default="lattice")
    p.add_argument("--bind", metavar="FILE", help="letter bindings for eval/equiv")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true",
                      help="enumerate every instance where the budget allows (default)")
    mode.add_argument("--samples", type=int, metavar="N",
                      help="draw N seeded samples per schema instead of enumerating")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-arity", type=int, default=2, metavar="K")
    p.add_argument("--schema", action="append", metavar="ID", help="check only these schemas")
    p.add_argument("--budget-states", type=int, default=na.DEFAULT_STATE_BUDGET, metavar="N",
                   help="cap on determinization states")
    p.add_argument("--budget-table", type=int, default=DEFAULT_TABLE_BUDGET, metavar="N",
                   help="cap on table rows |L|^p")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parktheory", description="Check Park theory laws over finite lattices and "
                                       "regular tree languages.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-axioms", help="search every law for counterexamples")
    _common(p)
    p.set_defaults(run=run_check_axioms)

    p = sub.add_parser("equiv", help="decide equality of two terms over tree languages")
    _common(p)
    p.add_argument("left", metavar="TERM1")
    p.add_argument("right", metavar="TERM2")
    p.set_defaults(run=run_equiv)

    p = sub.add_parser("eval", help="evaluate a term and print its value")
    _common(p)
    p.add_argument("term", metavar="TERM")
    p.set_defaults(run=run_eval)

    p = sub.add_parser("translate", help="rewrite between dagger and star forms")
    _common(p)
    p.add_argument("direction", choices=("to-star", "to-dagger"))
    p.add_argument("term", metavar="TERM")
    p.set_defaults(run=run_translate)

    p = sub.add_parser("catalog", help="list the law catalog")
    p.set_defaults(run=run_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("samples", "max_arity", "budget_states", "budget_table"):
        value = getattr(args, name, None)
        if value is not None and value < 0:
            parser.error(f"--{name.replace('_', '-')} must be non-negative")
    old_budget = na.state_budget()
    if hasattr(args, "budget_states"):
        na.set_state_budget(args.budget_states)
    try:
        return args.run(args)
    except (UsageError, ParkError) as e:
        print(f"parktheory {args.command}: {e}", file=sys.stderr)
        return FAILURE
    finally:
        na.set_state_budget(old_budget)


if __name__ == "__main__":
    sys.exit(main())
