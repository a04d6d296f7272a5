"""Bottom-up nondeterministic finite tree automata over ``Sigma`` and ``X_p``.

States are the integers ``0 .. num_states - 1``. A rule ``(sym, (q1, .., qk), q)``
reads ``sym(q1, .., qk) -> q``; a variable rule ``(i, q)`` reads ``x_i -> q``.
Automata are immutable values; every operation returns a new automaton.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from ..errors import BudgetExceeded, SortError
from .trees import RankedAlphabet, Tree

DEFAULT_STATE_BUDGET = 2**16

_state_budget = DEFAULT_STATE_BUDGET


def set_state_budget(limit: int) -> None:
    """Set the default cap on subset-construction states."""
    global _state_budget
    _state_budget = int(limit)


def state_budget() -> int:
    return _state_budget


@dataclass(frozen=True)
class Nfta:
    alphabet: RankedAlphabet
    var_count: int
    num_states: int
    rules: frozenset
    var_rules: frozenset
    finals: frozenset
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        n = self.num_states
        for sym, kids, q in self.rules:
            if self.alphabet.rank(sym) != len(kids):
                raise SortError(f"rule for {sym} has {len(kids)} children, rank is "
                                f"{self.alphabet.rank(sym)}")
            if not all(0 <= c < n for c in kids) or not 0 <= q < n:
                raise SortError(f"rule {sym}{kids} -> {q} uses an undeclared state")
        for i, q in self.var_rules:
            if not 1 <= i <= self.var_count:
                raise SortError(f"variable x{i} outside X_{self.var_count}")
            if not 0 <= q < n:
                raise SortError(f"variable rule x{i} -> {q} uses an undeclared state")
        for q in self.finals:
            if not 0 <= q < n:
                raise SortError(f"final state {q} undeclared")

    @classmethod
    def build(cls, alphabet, var_count, num_states, rules=(), var_rules=(), finals=()):
        return cls(alphabet, var_count, num_states, frozenset(rules),
                   frozenset(var_rules), frozenset(finals))

    @cached_property
    def by_symbol(self) -> dict[str, list[tuple[tuple[int, ...], int]]]:
        out: dict = defaultdict(list)
        for sym, kids, q in sorted(self.rules):
            out[sym].append((kids, q))
        return dict(out)

    @cached_property
    def by_var(self) -> dict[int, frozenset]:
        out: dict = defaultdict(set)
        for i, q in self.var_rules:
            out[i].add(q)
        return {i: frozenset(qs) for i, qs in out.items()}

    def run(self, t: Tree, memo: dict | None = None) -> frozenset:
        """States reachable at the root of ``t`` (the run semantics)."""
        if memo is not None:
            hit = memo.get(t)
            if hit is not None:
                return hit
        if isinstance(t, int):
            res = self.by_var.get(t, frozenset())
        else:
            kids = [self.run(c, memo) for c in t[1:]]
            res = frozenset(q for cs, q in self.by_symbol.get(t[0], ())
                            if all(c in s for c, s in zip(cs, kids)))
        if memo is not None:
            memo[t] = res
        return res

    def accepts(self, t: Tree, memo: dict | None = None) -> bool:
        return not self.run(t, memo).isdisjoint(self.finals)

    def __repr__(self):
        return (f"<Nfta X_{self.var_count} states={self.num_states} "
                f"rules={len(self.rules) + len(self.var_rules)} finals={sorted(self.finals)}>")

    def describe(self) -> str:
        """Human-readable listing of states, rules and final states."""
        lines = [f"states {self.num_states}  variables x1..x{self.var_count}"]
        for sym, kids, q in sorted(self.rules):
            lhs = sym if not kids else f"{sym}(" + ",".join(f"q{c}" for c in kids) + ")"
            lines.append(f"  {lhs} -> q{q}")
        for i, q in sorted(self.var_rules):
            lines.append(f"  x{i} -> q{q}")
        lines.append("finals " + " ".join(f"q{q}" for q in sorted(self.finals)))
        return "\n".join(lines)


# -- constructors ------------------------------------------------------------


def empty(alphabet: RankedAlphabet, var_count: int) -> Nfta:
    return Nfta.build(alphabet, var_count, 0)


def universal(alphabet: RankedAlphabet, var_count: int) -> Nfta:
    """Accepts every tree of ``T_Sigma(X_p)``."""
    rules = [(sym, (0,) * r, 0) for sym, r in alphabet.symbols]
    var_rules = [(i, 0) for i in range(1, var_count + 1)]
    return Nfta.build(alphabet, var_count, 1, rules, var_rules, [0])


def from_trees(trees: Iterable[Tree], alphabet: RankedAlphabet, var_count: int) -> Nfta:
    """An automaton for a finite set of trees (one state per distinct subtree)."""
    ids: dict = {}
    rules, var_rules, finals = set(), set(), set()

    def visit(t):
        if t in ids:
            return ids[t]
        if isinstance(t, int):
            if not 1 <= t <= var_count:
                raise SortError(f"variable x{t} outside X_{var_count}")
            q = ids[t] = len(ids)
            var_rules.add((t, q))
            return q
        kids = tuple(visit(c) for c in t[1:])
        q = ids[t] = len(ids)
        rules.add((t[0], kids, q))
        return q

    for t in trees:
        finals.add(visit(t))
    return Nfta.build(alphabet, var_count, len(ids), rules, var_rules, finals)


def _check_same(a: Nfta, b: Nfta) -> None:
    if a.alphabet != b.alphabet:
        raise SortError("automata over different alphabets")
    if a.var_count != b.var_count:
        raise SortError(f"automata over X_{a.var_count} and X_{b.var_count}")


# -- reachability ------------------------------------------------------------


def productive_witnesses(a: Nfta) -> dict[int, Tree]:
    """For every productive state, a tree of minimal depth reaching it."""
    wit: dict[int, Tree] = {}
    for i, q in sorted(a.var_rules):
        wit.setdefault(q, i)
    for sym, kids, q in sorted(a.rules):
        if not kids:
            wit.setdefault(q, (sym,))
    rules = sorted((sym, kids, q) for sym, kids, q in a.rules if kids)
    while True:
        # one round per depth level keeps the witnesses depth-minimal
        found = {}
        for sym, kids, q in rules:
            if q not in wit and q not in found and all(c in wit for c in kids):
                found[q] = (sym, *(wit[c] for c in kids))
        if not found:
            return wit
        wit.update(found)


def productive(a: Nfta) -> set[int]:
    key = "productive"
    if key not in a._cache:
        a._cache[key] = set(productive_witnesses(a))
    return a._cache[key]


def is_empty(a: Nfta) -> bool:
    return productive(a).isdisjoint(a.finals)


def shortest_tree(a: Nfta) -> Tree | None:
    """An accepted tree of minimal depth, or ``None`` for the empty language."""
    from .trees import depth

    wit = productive_witnesses(a)
    best = [wit[q] for q in a.finals if q in wit]
    if not best:
        return None
    return min(best, key=lambda t: (depth(t), repr(t)))


def trim(a: Nfta) -> Nfta:
    """Drop states that are unreachable bottom-up or cannot reach a final state."""
    prod = productive(a)
    rules = [(s, k, q) for s, k, q in a.rules if q in prod and all(c in prod for c in k)]
    useful = {q for q in a.finals if q in prod}
    changed = True
    while changed:
        changed = False
        for _, kids, q in rules:
            if q in useful:
                for c in kids:
                    if c not in useful:
                        useful.add(c)
                        changed = True
    keep = sorted(useful)
    ren = {q: i for i, q in enumerate(keep)}
    return Nfta.build(
        a.alphabet, a.var_count, len(keep),
        [(s, tuple(ren[c] for c in k), ren[q]) for s, k, q in rules
         if q in ren and all(c in ren for c in k)],
        [(i, ren[q]) for i, q in a.var_rules if q in ren],
        [ren[q] for q in a.finals if q in ren])


# -- boolean operations ---------------------------------------------------------


def union(a: Nfta, b: Nfta) -> Nfta:
    """Disjoint union of the two automata."""
    _check_same(a, b)
    off = a.num_states
    return Nfta.build(
        a.alphabet, a.var_count, a.num_states + b.num_states,
        set(a.rules) | {(s, tuple(c + off for c in k), q + off) for s, k, q in b.rules},
        set(a.var_rules) | {(i, q + off) for i, q in b.var_rules},
        set(a.finals) | {q + off for q in b.finals})


def determinize(a: Nfta, budget: int | None = None) -> Nfta:
    """Complete deterministic automaton for the same language (subset construction).

    Only subsets reachable bottom-up are built; for each of them and each
    symbol there is exactly one successor (possibly the empty subset).
    """
    limit = state_budget() if budget is None else budget
    subsets: list[frozenset] = []
    ids: dict[frozenset, int] = {}

    def sid(s: frozenset) -> int:
        q = ids.get(s)
        if q is None:
            if len(subsets) >= limit:
                raise BudgetExceeded(f"subset construction exceeded {limit} states")
            q = ids[s] = len(subsets)
            subsets.append(s)
        return q

    by_sym = a.by_symbol
    rules, var_rules = set(), set()
    for sym, r in a.alphabet.symbols:
        if r == 0:
            rules.add((sym, (), sid(frozenset(q for _, q in by_sym.get(sym, ())))))
    for i in range(1, a.var_count + 1):
        var_rules.add((i, sid(a.by_var.get(i, frozenset()))))
    if not subsets:
        # no leaves at all: the language is empty over every tree
        return Nfta.build(a.alphabet, a.var_count, 0)
    done = 0
    ranked = [(sym, r) for sym, r in a.alphabet.symbols if r > 0]
    while done < len(subsets):
        hi = len(subsets)
        for sym, r in ranked:
            cand = by_sym.get(sym, ())
            for kids in itertools.product(range(hi), repeat=r):
                if max(kids) < done:
                    continue
                sets = [subsets[k] for k in kids]
                tgt = frozenset(q for cs, q in cand if all(c in s for c, s in zip(cs, sets)))
                rules.add((sym, kids, sid(tgt)))
        done = hi
    finals = [i for i, s in enumerate(subsets) if not s.isdisjoint(a.finals)]
    return Nfta.build(a.alphabet, a.var_count, len(subsets), rules, var_rules, finals)


def is_deterministic(a: Nfta) -> bool:
    seen = set()
    for sym, kids, _ in a.rules:
        if (sym, kids) in seen:
            return False
        seen.add((sym, kids))
    return all(len(qs) <= 1 for qs in a.by_var.values())


def complement(a: Nfta, budget: int | None = None) -> Nfta:
    """Accepts exactly ``T_Sigma(X_p)`` minus the language of ``a``."""
    d = determinize(a, budget)
    if d.num_states == 0:
        return universal(a.alphabet, a.var_count)
    return Nfta.build(d.alphabet, d.var_count, d.num_states, d.rules, d.var_rules,
                      set(range(d.num_states)) - set(d.finals))


def product(a: Nfta, b: Nfta, finals) -> Nfta:
    """Synchronised product; ``finals(pa, pb)`` decides final pairs."""
    _check_same(a, b)
    nb = b.num_states
    pair = lambda x, y: x * nb + y
    rules = set()
    for sym, rows in a.by_symbol.items():
        for ka, qa in rows:
            for kb, qb in b.by_symbol.get(sym, ()):
                rules.add((sym, tuple(pair(x, y) for x, y in zip(ka, kb)), pair(qa, qb)))
    var_rules = {(i, pair(qa, qb)) for i, qa in a.var_rules for qb in b.by_var.get(i, ())}
    fin = [pair(x, y) for x in range(a.num_states) for y in range(nb) if finals(x, y)]
    return Nfta.build(a.alphabet, a.var_count, a.num_states * nb, rules, var_rules, fin)


def intersect(a: Nfta, b: Nfta) -> Nfta:
    return trim(product(a, b, lambda x, y: x in a.finals and y in b.finals))


def difference(a: Nfta, b: Nfta, budget: int | None = None) -> Nfta:
    return intersect(a, complement(b, budget))


def included(a: Nfta, b: Nfta, budget: int | None = None) -> bool:
    """Language inclusion, decided as emptiness of ``a`` minus ``b``."""
    _check_same(a, b)
    if is_empty(a):
        return True
    return is_empty(difference(a, b, budget))


def equivalent(a: Nfta, b: Nfta, budget: int | None = None) -> bool:
    return included(a, b, budget) and included(b, a, budget)


def separating_tree(a: Nfta, b: Nfta, budget: int | None = None):
    """A minimal-depth tree in the symmetric difference, with the side holding it.

    Returns ``None`` when the languages are equal, else ``(tree, "left")`` or
    ``(tree, "right")``.
    """
    from .trees import depth

    found = []
    for side, x, y in (("left", a, b), ("right", b, a)):
        t = shortest_tree(difference(x, y, budget))
        if t is not None:
            found.append((depth(t), repr(t), t, side))
    if not found:
        return None
    _, _, t, side = min(found)
    return t, side


# -- epsilon links -----------------------------------------------------------


def eliminate_epsilon(alphabet, var_count, num_states, rules, var_rules, finals,
                      eps: dict[int, set[int]]) -> Nfta:
    """Resolve links ``s -> t`` ("whatever reaches ``s`` also reaches ``t``")."""
    closure: dict[int, set[int]] = {}

    def close(s):
        if s in closure:
            return closure[s]
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v in eps.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        closure[s] = seen
        return seen

    new_rules = {(sym, kids, t) for sym, kids, q in rules for t in close(q)}
    new_vars = {(i, t) for i, q in var_rules for t in close(q)}
    return Nfta.build(alphabet, var_count, num_states, new_rules, new_vars, finals)


def rename_vars(a: Nfta, mapping, var_count: int) -> Nfta:
    """Rename variable leaves ``x_i -> x_mapping(i)``; ``None`` drops the rule."""
    var_rules = set()
    for i, q in a.var_rules:
        j = mapping(i)
        if j is not None:
            var_rules.add((j, q))
    return Nfta.build(a.alphabet, var_count, a.num_states, a.rules, var_rules, a.finals)


def random_nfta(alphabet: RankedAlphabet, var_count: int, rng, max_states: int = 4,
                max_rules: int = 3, do_trim: bool = True) -> Nfta:
    """A small random automaton; seeded through ``rng`` (a numpy Generator).

    Every state first gets an anchor rule built from lower-numbered states
    (or a leaf), so all states are productive; further rules are random.
    """
    k = int(rng.integers(1, max_states + 1))
    leaves = [("sym", s) for s, r in alphabet.symbols if r == 0]
    leaves += [("var", i) for i in range(1, var_count + 1)]
    inner = [(s, r) for s, r in alphabet.symbols if r > 0]
    rules, var_rules = set(), set()

    def add_leaf(q):
        kind, what = leaves[int(rng.integers(len(leaves)))]
        if kind == "sym":
            rules.add((what, (), q))
        else:
            var_rules.add((what, q))

    for q in range(k):
        if leaves and (q == 0 or not inner or rng.random() < 0.3):
            add_leaf(q)
        elif inner and q > 0:
            sym, r = inner[int(rng.integers(len(inner)))]
            rules.add((sym, tuple(int(rng.integers(q)) for _ in range(r)), q))
    for sym, r in alphabet.symbols:
        for _ in range(int(rng.integers(0, max_rules + 1))):
            kids = tuple(int(rng.integers(k)) for _ in range(r))
            rules.add((sym, kids, int(rng.integers(k))))
    for i in range(1, var_count + 1):
        if rng.random() < 0.4:
            var_rules.add((i, int(rng.integers(k))))
    finals = {q for q in range(k) if rng.random() < 0.4} or {k - 1}
    a = Nfta.build(alphabet, var_count, k, rules, var_rules, finals)
    return trim(a) if do_trim else a
