"""Ranked alphabets and finite trees over ``Sigma`` and variables ``x_1 .. x_p``.

A tree is either an ``int`` ``i >= 1`` (the variable ``x_i``) or a tuple
``(symbol, child_1, ..., child_k)`` whose length matches the symbol's rank.
Depth counts nodes on the longest root-to-leaf path, so leaves have depth 1.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Union

from ..errors import ParseError, SortError

Tree = Union[int, tuple]

_VAR_NAME = re.compile(r"x(\d+)$")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")


@dataclass(frozen=True)
class RankedAlphabet:
    symbols: tuple[tuple[str, int], ...]
    ranks: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ranks = {}
        for name, rank in self.symbols:
            if name in ranks:
                raise SortError(f"duplicate symbol {name!r}")
            if rank < 0:
                raise SortError(f"negative rank for {name!r}")
            if not _NAME.match(name) or _VAR_NAME.match(name):
                raise SortError(f"invalid symbol name {name!r}")
            ranks[name] = rank
        object.__setattr__(self, "ranks", ranks)

    @classmethod
    def of(cls, *pairs: tuple[str, int]) -> "RankedAlphabet":
        return cls(tuple((str(n), int(r)) for n, r in pairs))

    def __hash__(self):
        return hash(self.symbols)

    def rank(self, name: str) -> int:
        try:
            return self.ranks[name]
        except KeyError:
            raise SortError(f"unknown symbol {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self.ranks

    @property
    def max_rank(self) -> int:
        return max((r for _, r in self.symbols), default=0)


def is_var(t: Tree) -> bool:
    return isinstance(t, int)


def depth(t: Tree) -> int:
    if isinstance(t, int) or len(t) == 1:
        return 1
    return 1 + max(depth(c) for c in t[1:])


def variables(t: Tree) -> list[int]:
    """Variable occurrences of ``t`` from left to right."""
    if isinstance(t, int):
        return [t]
    out = []
    for c in t[1:]:
        out.extend(variables(c))
    return out


def tree_str(t: Tree) -> str:
    if isinstance(t, int):
        return f"x{t}"
    if len(t) == 1:
        return t[0]
    return t[0] + "(" + ",".join(tree_str(c) for c in t[1:]) + ")"


def check_tree(t: Tree, alphabet: RankedAlphabet, var_count: int) -> None:
    if isinstance(t, int):
        if not 1 <= t <= var_count:
            raise SortError(f"variable x{t} outside X_{var_count}")
        return
    if alphabet.rank(t[0]) != len(t) - 1:
        raise SortError(f"symbol {t[0]} has rank {alphabet.rank(t[0])}, got {len(t) - 1} children")
    for c in t[1:]:
        check_tree(c, alphabet, var_count)


_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_']*)|(.))")


def parse_tree(text: str, alphabet: RankedAlphabet, var_count: int | None = None) -> Tree:
    """Parse ``g(x1,s(c))``-style notation."""
    tokens = [(m.group(1) or m.group(2), m.start()) for m in _TOKEN.finditer(text)
              if (m.group(1) or m.group(2)) and not (m.group(2) or "").isspace()]
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of tree", column=len(text) + 1)
        tok = tokens[pos]
        pos += 1
        return tok

    def node() -> Tree:
        name, col = take()
        var = _VAR_NAME.match(name)
        if var:
            return int(var.group(1))
        if name not in alphabet:
            raise ParseError(f"unknown symbol {name!r}", column=col + 1)
        kids = []
        if pos < len(tokens) and tokens[pos][0] == "(":
            take()
            kids.append(node())
            while pos < len(tokens) and tokens[pos][0] == ",":
                take()
                kids.append(node())
            close, ccol = take()
            if close != ")":
                raise ParseError(f"expected ')', got {close!r}", column=ccol + 1)
        return (name, *kids)

    t = node()
    if pos != len(tokens):
        raise ParseError(f"trailing input {tokens[pos][0]!r}", column=tokens[pos][1] + 1)
    check_tree(t, alphabet, var_count if var_count is not None else max(variables(t), default=0))
    return t


def enumerate_trees(alphabet: RankedAlphabet, var_count: int, max_depth: int) -> list[Tree]:
    """All trees of ``T_Sigma(X_p)`` with depth at most ``max_depth``, by depth."""
    if max_depth < 1:
        return []
    leaves = [(name,) for name, r in alphabet.symbols if r == 0]
    leaves += list(range(1, var_count + 1))
    upto = list(leaves)
    prev_start = 0
    for _ in range(1, max_depth):
        fresh = []
        for name, r in alphabet.symbols:
            if r == 0:
                continue
            for kids in itertools.product(range(len(upto)), repeat=r):
                # levels are appended in order, so a child at the previous
                # maximum depth is one with index >= prev_start
                if max(kids) >= prev_start:
                    fresh.append((name, *(upto[k] for k in kids)))
        prev_start = len(upto)
        upto = upto + fresh
    return upto


def substitute_tree(t: Tree, choices: dict[int, Tree]) -> Tree:
    """Replace each variable ``x_i`` by ``choices[i]`` (same tree for every occurrence)."""
    if isinstance(t, int):
        return choices[t]
    return (t[0], *(substitute_tree(c, choices) for c in t[1:]))


def rename_tree(t: Tree, mapping) -> Tree:
    if isinstance(t, int):
        return mapping(t)
    return (t[0], *(rename_tree(c, mapping) for c in t[1:]))


def trees_str(ts: Iterable[Tree]) -> str:
    return "{" + ", ".join(sorted(tree_str(t) for t in ts)) + "}"
