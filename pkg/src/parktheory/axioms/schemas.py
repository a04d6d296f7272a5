"""Law schemas as templates in the term grammar.

A template mentions letters and arity expressions in braces, e.g.
``f . pair(dagger(f), id({p}))``. Instantiating a schema at an arity
assignment substitutes the braces, declares the letters at their sorts and
parses both sides. Implications list hypotheses that filter instances.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable

from ..terms.ast import Signature, Term
from ..terms.syntax import parse_term

_BRACES = re.compile(r"\{([^{}]*)\}")
_ARITH = re.compile(r"[\sA-Za-z0-9_+*-]*$")


def _value(expr: str, arities: dict) -> int:
    if not _ARITH.match(expr):
        raise ValueError(f"bad arity expression {expr!r}")
    return int(eval(expr, {"__builtins__": {}}, dict(arities)))


def fill(template: str, arities: dict) -> str:
    return _BRACES.sub(lambda m: str(_value(m.group(1), arities)), template)


@dataclass(frozen=True)
class Instance:
    arities: dict
    sig: Signature
    lhs: Term
    rhs: Term
    hypotheses: tuple  # of (Term, relation, Term)
    repairs: tuple  # of (letter, Term)


@dataclass(frozen=True)
class Schema:
    id: str
    relation: str  # "<=" or "="
    group: str
    letters: dict
    lhs: str
    rhs: str
    variables: tuple = ()
    hypotheses: tuple = ()
    repairs: dict = field(default_factory=dict)
    lower: dict = field(default_factory=dict)
    upper: dict = field(default_factory=dict)
    constraint: str | None = None
    gloss: str = ""
    builder: Callable | None = None

    def assignments(self, max_arity: int):
        ranges = [range(self.lower.get(v, 0), min(self.upper.get(v, max_arity), max_arity) + 1)
                  for v in self.variables]
        for combo in itertools.product(*ranges):
            ar = dict(zip(self.variables, combo))
            if self.constraint is None or eval(self.constraint, {"__builtins__": {}}, dict(ar)):
                yield ar

    def texts(self, arities: dict):
        """``(letters, lhs, rhs, hypotheses, repairs)`` with arities substituted."""
        if self.builder is not None:
            letters, lhs, rhs = self.builder(arities)
        else:
            letters, lhs, rhs = self.letters, self.lhs, self.rhs
        sorts = {name: (_value(a, arities), _value(b, arities)) for name, (a, b) in letters.items()}
        hyps = tuple((fill(l, arities), r, fill(rr, arities)) for l, r, rr in self.hypotheses)
        reps = tuple((k, fill(v, arities)) for k, v in self.repairs.items())
        return sorts, fill(lhs, arities), fill(rhs, arities), hyps, reps

    def instantiate(self, arities: dict) -> Instance:
        sorts, lhs, rhs, hyps, reps = self.texts(arities)
        sig = Signature(sorts)
        return Instance(dict(arities), sig, parse_term(lhs, sig), parse_term(rhs, sig),
                        tuple((parse_term(l, sig), r, parse_term(rr, sig)) for l, r, rr in hyps),
                        tuple((k, parse_term(v, sig)) for k, v in reps))

    def formula(self) -> str:
        """The schema as one line of text."""
        if self.builder is not None:
            return self.gloss
        body = f"{self.lhs} {self.relation} {self.rhs}"
        if self.hypotheses:
            cond = " and ".join(f"{l} {r} {rr}" for l, r, rr in self.hypotheses)
            body = f"if {cond} then {body}"
        return body

    def sorts_text(self) -> str:
        return ", ".join(f"{k}: {a} -> {b}" for k, (a, b) in self.letters.items())


# -- template helpers -------------------------------------------------------------


def tau(s: str, n: str = "{n}", p: str = "{p}") -> str:
    return (f"({s} . sum(sum(id({n}), zero({n})), id({p}))"
            f" | sum(sum(zero({n}), id({n})), zero({p})))")


PARAMS = "sum(zero({n}), id({p}))"          # 0_n (+) 1_p
HEAD = "sum(id({n}), zero({p}))"            # 1_n (+) 0_p
ENDO = {"f": ("n", "n+p")}
ENDO2 = {"f": ("n", "n+p"), "g": ("n", "n+p")}
ENDO3 = {"f": ("n", "n+p"), "g": ("n", "n+p"), "h": ("n", "n+p")}
NP = ("n", "p")
NPQ = ("n", "p", "q")
# least pre-fixed point of x |-> f . <x, 0_n (+) 1_p> | g0 above a seed g0
_LIFT = ("dagger(f . sum(id({n}), sum(zero({n}), id({p}))) | ({seed}) . sum(zero({n}), id({n+p})))")


def _lift(seed: str) -> str:
    return _LIFT.replace("{seed}", seed)


def _tuple_law(ar):
    n, p = ar["n"], ar["p"]
    letters = {f"f{k}": ("1", "p") for k in range(1, n + 1)}
    items = ", ".join(letters)
    return letters, f"inj({{i}},{{n}}) . tup({items}; {p})", f"f{ar['i']}"


def _copairing_law(ar):
    n = ar["n"]
    items = ", ".join(f"inj({k},{n}) . f" for k in range(1, n + 1))
    return {"f": ("n", "p")}, f"tup({items}; {{p}})", "f"


def _schemas() -> list[Schema]:
    S = Schema
    out = [
        # theory equations
        S("TH1", "=", "theory", {"f": ("m", "n"), "g": ("n", "p"), "h": ("p", "q")},
          "(f . g) . h", "f . (g . h)", ("m", "n", "p", "q"), gloss="composition is associative"),
        S("TH2A", "=", "theory", {"f": NP}, "id({n}) . f", "f", NP, gloss="left identity"),
        S("TH2B", "=", "theory", {"f": NP}, "f . id({p})", "f", NP, gloss="right identity"),
        S("TH3", "=", "theory", {}, "", "", ("n", "i", "p"), lower={"n": 1, "i": 1},
          constraint="i <= n", builder=_tuple_law,
          gloss="inj(i,n) . tup(f1, ..., fn; p) = fi, fk: 1 -> p"),
        S("TH4", "=", "theory", {"f": NP}, "", "", NP, builder=_copairing_law,
          gloss="tup(inj(1,n) . f, ..., inj(n,n) . f; p) = f, f: n -> p"),
        S("TH5", "=", "theory", {}, "inj(1,1)", "id(1)", gloss="the injection 1 -> 1 is the identity"),
        S("PS1", "=", "pairing", {"f": NP, "g": ("m", "p"), "h": ("p", "q")},
          "pair(f, g) . h", "pair(f . h, g . h)", ("n", "m", "p", "q")),
        S("PS2", "=", "pairing", {"f": NP, "g": ("m", "q"), "h": ("p", "r"), "k": ("q", "r")},
          "sum(f, g) . pair(h, k)", "pair(f . h, g . k)", ("n", "m", "p", "q", "r"),
          upper={"n": 1, "m": 1, "r": 1}),
        S("PS3", "=", "pairing", {"f": NP, "g": ("m", "q"), "h": ("p", "r"), "k": ("q", "s")},
          "sum(f, g) . sum(h, k)", "sum(f . h, g . k)", ("n", "m", "p", "q", "r", "s"),
          upper={"n": 1, "m": 1, "p": 1, "q": 1}),
        S("PS4", "=", "pairing", {"f": NP}, "sum(f, zero(0))", "f", NP),
        S("PS5", "=", "pairing", {"f": NP}, "sum(zero(0), f)", "f", NP),
        # the twelve axioms
        S("EQ1", "=", "semilattice", {"f": NP, "g": NP, "h": NP}, "(f | g) | h", "f | (g | h)", NP),
        S("EQ2", "=", "semilattice", {"f": NP, "g": NP}, "f | g", "g | f", NP),
        S("EQ3", "=", "semilattice", {"f": NP}, "f | f", "f", NP),
        S("EQ4", "<=", "semilattice", {"f": NP, "g": NP}, "inj({i},{n}) . (f | g)",
          "inj({i},{n}) . f | inj({i},{n}) . g", ("n", "i", "p"), lower={"n": 1, "i": 1},
          constraint="i <= n"),
        S("EQ5", "<=", "semilattice", {"f": NP, "f2": NP, "g": ("p", "q"), "g2": ("p", "q")},
          "f . g", "(f | f2) . (g | g2)", NPQ),
        S("EQ6", "<=", "residuation", {"g": ("p", "q"), "h": ("n", "q")},
          "resid(h, g) . g", "h", NPQ),
        S("EQ7", "<=", "residuation", {"f": NP, "g": ("p", "q")}, "f", "resid(f . g, g)", NPQ),
        S("EQ8", "<=", "residuation", {"g": ("p", "q"), "h": ("n", "q"), "h2": ("n", "q")},
          "resid(h, g)", "resid(h | h2, g)", NPQ),
        S("EQ9", "<=", "dagger", ENDO2, "dagger(f)", "dagger(f | g)", NP),
        S("EQ10", "<=", "dagger", ENDO, "f . pair(dagger(f), id({p}))", "dagger(f)", NP),
        S("EQ11", "<=", "dagger", {"f": ("n", "n+p"), "g": ("p", "q")}, "dagger(f) . g",
          "dagger(f . sum(id({n}), g))", NPQ),
        S("EQ12", "<=", "dagger", {"g": NP}, "dagger(resid(g, pair(g, id({p}))))", "g", NP),
        # consequences
        S("EQ13", "=", "semilattice", {"f": NP, "g": NP}, "inj({i},{n}) . (f | g)",
          "inj({i},{n}) . f | inj({i},{n}) . g", ("n", "i", "p"), lower={"n": 1, "i": 1},
          constraint="i <= n"),
        S("EQ14", "=", "semilattice", {"f": NP, "g": NP, "h": ("p", "q")}, "(f | g) . h",
          "f . h | g . h", NPQ),
        S("EQ15", "=", "semilattice", {"f": NP}, "f | bot({n},{p})", "f", NP),
        S("EQ16", "=", "semilattice", {"g": ("p", "q")}, "bot({n},{p}) . g", "bot({n},{q})", NPQ),
        S("EQ17", "<=", "semilattice", {"f": NP, "f2": NP, "g": ("p", "q"), "g2": ("p", "q")},
          "f . g", "f2 . g2", NPQ, hypotheses=(("f", "<=", "f2"), ("g", "<=", "g2")),
          repairs={"f2": "f | f2", "g2": "g | g2"}),
        S("EQ18", "<=", "dagger", {"f": ("n", "n+p"), "g": NP}, "dagger(f)", "g", NP,
          hypotheses=(("f . pair(g, id({p}))", "<=", "g"),),
          repairs={"g": "dagger(f | g . sum(zero({n}), id({p})))"}),
        S("EQ19", "=", "dagger", ENDO, "f . pair(dagger(f), id({p}))", "dagger(f)", NP),
        S("EQ20", "=", "dagger", {"f": ("n", "n+p"), "g": ("p", "q")}, "dagger(f) . g",
          "dagger(f . sum(id({n}), g))", NPQ),
        S("EQ21", "<=", "dagger", ENDO2, "dagger(f)", "dagger(g)", NP,
          hypotheses=(("f", "<=", "g"),), repairs={"g": "f | g"}),
        S("EQ22", "<=", "semilattice", {"f": NP, "g": NP, "h": ("p", "q")}, "(f | g) . h",
          "f . h | g . h", NPQ),
        S("EQ23", "<=", "residuation", {"g": ("p", "q"), "h": ("n", "q"), "h2": ("n", "q")},
          "resid(h, g)", "resid(h2, g)", NPQ, hypotheses=(("h", "<=", "h2"),),
          repairs={"h2": "h | h2"}),
        # star
        S("EQ24", "=", "star", {"f": ("n", "n+p"), "g": ("p", "q")}, "star(f) . sum(id({n}), g)",
          "star(f . sum(id({n}), g))", NPQ),
        S("EQ25", "=", "star", ENDO, "star(f)",
          f"star({tau('f')}) . pair(bot({{n}},{{n+p}}), id({{n+p}}))", NP),
        S("EQ26", "<=", "star", ENDO, f"f . pair(star(f), {PARAMS}) | {HEAD}", "star(f)", NP),
        S("EQ27", "<=", "star", ENDO3, f"star(f) . pair(h, {PARAMS})", "g", NP,
          hypotheses=((f"f . pair(g, {PARAMS}) | h", "<=", "g"),),
          repairs={"g": _lift("g | h")}),
        S("EQ28", "<=", "star", ENDO2, f"star(f) . pair(g, {PARAMS})", "g", NP,
          hypotheses=((f"f . pair(g, {PARAMS})", "<=", "g"),), repairs={"g": _lift("g")}),
        S("EQ29", "<=", "star", {"f": ("n", "n+p"), "g": ("p", "q")},
          "star(f) . sum(id({n}), g)", "star(f . sum(id({n}), g))", NPQ),
        S("EQ30", "<=", "star", ENDO2, "star(f)", "star(f | g)", NP),
        S("EQ31", "<=", "star", {"g": ("n", "n+p")}, f"star(resid(g, pair(g, {PARAMS})))",
          f"resid(g, pair(g, {PARAMS}))", NP),
        S("EQ32", "<=", "star", ENDO2, "star(f)", "g", NP,
          hypotheses=((f"{HEAD} | f | g . pair(g, {PARAMS})", "<=", "g"),)),
        S("EQ33", "<=", "star", ENDO, f"{HEAD} | f | star(f) . pair(star(f), {PARAMS})",
          "star(f)", NP),
        # further identities
        S("BOTDEF", "=", "dagger", {}, "bot({n},{p})", "dagger(sum(id({n}), zero({p})))", NP),
        S("PROP44A", "<=", "residuation", {"g": ("p", "q"), "h": ("n", "q")},
          "bot({n},{p}) . g", "h", NPQ, gloss="bottom composed with anything is least"),
        S("PROP44B", "=", "residuation", {"f": NP, "f2": NP, "g": ("p", "q")}, "(f | f2) . g",
          "f . g | f2 . g", NPQ),
        S("PROP45", "<=", "residuation", {"g": ("p", "q"), "g2": ("p", "q"), "h": ("n", "q")},
          "resid(h, g2)", "resid(h, g)", NPQ, hypotheses=(("g", "<=", "g2"),),
          repairs={"g2": "g | g2"}),
        S("GALOIS_A", "<=", "residuation", {"f": NP, "g": ("p", "q"), "h": ("n", "q")},
          "f", "resid(h, g)", NPQ, hypotheses=(("f . g", "<=", "h"),),
          repairs={"h": "h | f . g"}),
        S("GALOIS_B", "<=", "residuation", {"f": NP, "g": ("p", "q"), "h": ("n", "q")},
          "f . g", "h", NPQ, hypotheses=(("f", "<=", "resid(h, g)"),)),
        S("DEF61_DAGGER", "=", "translation", ENDO, "dagger(f)",
          "star(f) . pair(bot({n},{p}), id({p}))", NP),
        S("DEF61_STAR", "=", "translation", ENDO, "star(f)", f"dagger({tau('f')})", NP),
        S("TAUTAU", "=", "translation", ENDO, tau(tau("f"), "{n}", "{n+p}"),
          "f . sum(sum(id({n}), zero({2*n})), id({p})) | sum(sum(zero({2*n}), id({n})), zero({p}))"
          " | sum(sum(zero({n}), id({n})), zero({n+p}))", NP),
        S("APP_TAU_BOT", "=", "translation", ENDO,
          f"{tau(tau('f'), '{n}', '{n+p}')} . sum(id({{n}}), pair(bot({{n}},{{n+p}}), id({{n+p}})))",
          tau("f"), NP),
        S("BEKIC", "=", "vector", {"f": ("n", "n+m+p"), "g": ("m", "n+m+p")}, "dagger(pair(f, g))",
          "pair(dagger(f) . pair(dagger(g . pair(dagger(f), id({m+p}))), id({p})),"
          " dagger(g . pair(dagger(f), id({m+p}))))", ("n", "m", "p"), upper={"m": 1}),
        S("RESPAIR", "=", "vector", {"h": ("n", "q"), "h2": ("m", "q"), "g": ("p", "q")},
          "resid(pair(h, h2), g)", "pair(resid(h, g), resid(h2, g))", ("n", "m", "p", "q"),
          upper={"m": 1}),
    ]
    return out


CATALOG: tuple[Schema, ...] = tuple(_schemas())

FALSE_DEMO = Schema("FALSE_DEMO", "<=", "demo", {"f": NP, "g": NP}, "f | g", "f", NP,
                    gloss="deliberately false")

_BY_ID = {s.id: s for s in CATALOG + (FALSE_DEMO,)}


def catalog() -> list[Schema]:
    """Every sound schema, in a fixed order. ``FALSE_DEMO`` is only reachable by id."""
    return list(CATALOG)


def lookup(schema_id: str) -> Schema:
    try:
        return _BY_ID[schema_id]
    except KeyError:
        raise KeyError(f"unknown schema {schema_id!r}") from None
