"""Concrete syntax for terms: tokenizer, recursive-descent parser and printer.

``.`` (composition) is left-associative and binds tighter than ``|`` (join).
The printer inserts exactly the parentheses needed for ``parse(print(t)) == t``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError, SortError
from .ast import (Base, Bot, Comp, Dagger, Id, Inj, Join, Letter, Pair, Resid, Signature,
                  Star, Sum, Term, Tup, Zero, sort_of)

KEYWORDS = frozenset({"inj", "id", "zero", "bot", "base", "tup", "pair", "sum",
                      "dagger", "star", "resid"})

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<arrow>->)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[().,;|])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind != "ws":
            out.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.toks = tokenize(text)
        self.i = 0
        self.sig = sig

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.cur
        raise ParseError(msg, tok.line, tok.column)

    def expect(self, text: str) -> Token:
        tok = self.cur
        if tok.text != text:
            shown = repr(tok.text) if tok.kind != "eof" else "end of input"
            self.fail(f"expected {text!r}, got {shown}")
        self.i += 1
        return tok

    def integer(self) -> int:
        tok = self.cur
        if tok.kind != "int":
            self.fail(f"expected a number, got {tok.text!r}" if tok.kind != "eof"
                      else "expected a number, got end of input")
        self.i += 1
        return int(tok.text)

    def checked(self, t: Term, tok: Token) -> Term:
        try:
            sort_of(t, self.sig)
        except SortError as e:
            raise SortError(f"line {tok.line}, column {tok.column}: {e}") from None
        return t

    def term(self) -> Term:
        t = self.comp()
        while self.cur.text == "|":
            tok = self.cur
            self.i += 1
            t = self.checked(Join(t, self.comp()), tok)
        return t

    def comp(self) -> Term:
        t = self.prim()
        while self.cur.text == ".":
            tok = self.cur
            self.i += 1
            t = self.checked(Comp(t, self.prim()), tok)
        return t

    def prim(self) -> Term:
        tok = self.cur
        if tok.text == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        if tok.kind != "name":
            self.fail(f"expected a term, got {tok.text!r}" if tok.kind != "eof"
                      else "expected a term, got end of input")
        self.i += 1
        word = tok.text
        if word not in KEYWORDS:
            if word not in self.sig:
                self.fail(f"unknown letter {word!r}", tok)
            return Letter(word)
        self.expect("(")
        if word == "inj":
            i = self.integer()
            self.expect(",")
            t = Inj(i, self.integer())
        elif word == "id":
            t = Id(self.integer())
        elif word == "zero":
            t = Zero(self.integer())
        elif word == "bot":
            n = self.integer()
            self.expect(",")
            t = Bot(n, self.integer())
        elif word == "base":
            values = []
            if self.cur.text != "->":
                values.append(self.integer())
                while self.cur.text == ",":
                    self.i += 1
                    values.append(self.integer())
            self.expect("->")
            t = Base(tuple(values), self.integer())
        elif word == "tup":
            items = []
            if self.cur.text != ";":
                items.append(self.term())
                while self.cur.text == ",":
                    self.i += 1
                    items.append(self.term())
            self.expect(";")
            t = Tup(tuple(items), self.integer())
        elif word in ("pair", "sum", "resid"):
            a = self.term()
            self.expect(",")
            b = self.term()
            t = {"pair": Pair, "sum": Sum, "resid": Resid}[word](a, b)
        else:
            body = self.term()
            self.expect(")")
            try:
                n, m = sort_of(body, self.sig)
            except SortError as e:
                raise SortError(f"line {tok.line}, column {tok.column}: {e}") from None
            if m < n:
                raise SortError(f"line {tok.line}, column {tok.column}: "
                                f"{word} needs n -> n + p, got {n}->{m}")
            cls = Dagger if word == "dagger" else Star
            return cls(body, n, m - n)
        self.expect(")")
        return self.checked(t, tok)


def parse_term(text: str, sig: Signature) -> Term:
    """Parse and sort-check one term."""
    p = _Parser(text, sig)
    t = p.term()
    if p.cur.kind != "eof":
        p.fail(f"unexpected {p.cur.text!r} after the term")
    return t


def format_term(t: Term) -> str:
    return _fmt(t, 0)


def _fmt(t: Term, level: int) -> str:
    if isinstance(t, Join):
        s = f"{_fmt(t.left, 0)} | {_fmt(t.right, 1)}"
        return f"({s})" if level > 0 else s
    if isinstance(t, Comp):
        s = f"{_fmt(t.left, 1)} . {_fmt(t.right, 2)}"
        return f"({s})" if level > 1 else s
    if isinstance(t, Letter):
        return t.name
    if isinstance(t, Inj):
        return f"inj({t.i},{t.n})"
    if isinstance(t, Id):
        return f"id({t.n})"
    if isinstance(t, Zero):
        return f"zero({t.p})"
    if isinstance(t, Bot):
        return f"bot({t.n},{t.p})"
    if isinstance(t, Base):
        return f"base({','.join(map(str, t.assignment))}->{t.p})"
    if isinstance(t, Tup):
        inner = ", ".join(_fmt(x, 0) for x in t.items)
        return f"tup({inner}; {t.p})" if inner else f"tup(; {t.p})"
    if isinstance(t, (Pair, Sum, Resid)):
        word = {Pair: "pair", Sum: "sum", Resid: "resid"}[type(t)]
        return f"{word}({_fmt(t.left, 0)}, {_fmt(t.right, 0)})"
    if isinstance(t, Dagger):
        return f"dagger({_fmt(t.body, 0)})"
    if isinstance(t, Star):
        return f"star({_fmt(t.body, 0)})"
    raise TypeError(f"not a term: {t!r}")


def parse_signature(text: str):
    """Read ``symbol <name> <rank>`` and ``letter <name> <n> <p>`` lines.

    Each symbol also becomes a letter ``1 -> rank``; the symbols form the
    ranked alphabet of the tree backend.
    """
    from ..treelang.trees import RankedAlphabet

    symbols, letters = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if words[0] == "symbol" and len(words) == 3:
                symbols.append((words[1], int(words[2])))
            elif words[0] == "letter" and len(words) == 4:
                letters.append((words[1], int(words[2]), int(words[3])))
            else:
                raise ParseError("expected 'symbol <name> <rank>' or 'letter <name> <n> <p>'",
                                 lineno)
        except ValueError:
            raise ParseError("arities must be natural numbers", lineno) from None
    try:
        alphabet = RankedAlphabet.of(*symbols)
        sig = Signature(alphabet=alphabet)
        for name, rank in symbols:
            sig.add(name, 1, rank)
        for name, n, p in letters:
            sig.add(name, n, p)
    except SortError as e:
        raise ParseError(str(e)) from None
    return sig
