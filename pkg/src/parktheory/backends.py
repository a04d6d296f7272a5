"""Uniform adapters over ``Mon_L`` tables and regular tree languages.

A backend exposes the theory constants and operations under one set of
names, plus the order, a sampler and a way to explain a failed comparison.
Term evaluation and the axiom checker only talk to this interface.
"""

from __future__ import annotations

import numpy as np

from . import montheory as mt
from .errors import BudgetExceeded, SortError
from .lattice import (DEFAULT_ENUMERATION_BUDGET, HomSet, Lattice, random_monotone,
                      scalar_count_lower_bound)
from .treelang import morphisms as tm
from .treelang import nfta as na
from .treelang.trees import RankedAlphabet, tree_str


class LatticeModel:
    """``Mon_L`` for a finite lattice ``L``; equality is table equality."""

    kind = "lattice"

    def __init__(self, lattice: Lattice, enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
                 scalar_budget: int = 50_000):
        self.lattice = lattice
        self.enumeration_budget = enumeration_budget
        # past this many scalar maps the sampler switches to round-up repair
        self.scalar_budget = scalar_budget
        self._homsets: dict = {}
        # values of letter-free subterms, shared across evaluations
        self.constants: dict = {}

    def __repr__(self):
        return f"Mon_{self.lattice.name}"

    @property
    def name(self) -> str:
        return f"Mon_{self.lattice.name}"

    def inj(self, i, n):
        return mt.injection(i, n, self.lattice)

    def ident(self, n):
        return mt.identity(n, self.lattice)

    def zero(self, p):
        return mt.zero(p, self.lattice)

    def bot(self, n, p):
        return mt.bottom(n, p, self.lattice)

    def base(self, assignment, p):
        return mt.base_morphism(mt.BaseMap(len(assignment), p, tuple(assignment)), self.lattice)

    def comp(self, f, g):
        return mt.compose(f, g)

    def tup(self, fs, p):
        return mt.tupling(fs, p, self.lattice)

    def pair(self, f, g):
        return mt.pairing(f, g)

    def sum(self, f, g):
        return mt.separated_sum(f, g)

    def join(self, f, g):
        return mt.join_morphism(f, g)

    def dagger(self, f):
        return mt.dagger(f)

    def star(self, f):
        return mt.star(f)

    def resid(self, h, g):
        return mt.residual(h, g)

    def sort(self, f):
        return f.sort

    def equal(self, f, g) -> bool:
        return f == g

    def leq(self, f, g) -> bool:
        return mt.leq_morphism(f, g)

    def homset(self, n, p) -> HomSet | None:
        """The indexable hom-set, or ``None`` when its scalars are too many to list."""
        key = (n, p)
        if key not in self._homsets:
            try:
                self.lattice.check_arity(p)
                if scalar_count_lower_bound(self.lattice, p) > self.scalar_budget:
                    raise BudgetExceeded("too many scalar maps to list")
                self._homsets[key] = HomSet(self.lattice, n, p, self.scalar_budget)
            except BudgetExceeded:
                self._homsets[key] = None
        return self._homsets[key]

    def sample(self, n, p, rng):
        hs = self.homset(n, p)
        if hs is not None:
            return hs.random(rng)
        return random_monotone(self.lattice, n, p, rng)

    def witness(self, lhs, rhs, relation: str) -> str:
        """The first point where ``lhs <= rhs`` (or ``=``) fails, in words."""
        lat = self.lattice
        if relation == "=":
            bad = np.nonzero((lhs.table != rhs.table).any(axis=1))[0]
        else:
            bad = np.nonzero(~lat.leq[lhs.table, rhs.table].all(axis=1))[0]
        if not len(bad):
            return "no violating point"
        k = int(bad[0])
        point = lat.points(lhs.target)[k]
        name = lambda codes: "(" + ",".join(lat.elements[int(c)] for c in codes) + ")"
        return f"at {name(point)}: left {name(lhs.table[k])}, right {name(rhs.table[k])}"

    def show(self, f) -> str:
        return f.format_table()


class TreeModel:
    """``Reg_Sigma``; equality is language equivalence, order is inclusion."""

    kind = "tree"

    def __init__(self, alphabet: RankedAlphabet, max_states: int = 4):
        self.alphabet = alphabet
        self.max_states = max_states
        self.constants: dict = {}

    def __repr__(self):
        return f"Reg[{self.name}]"

    @property
    def name(self) -> str:
        return "Reg_{" + ",".join(f"{s}/{r}" for s, r in self.alphabet.symbols) + "}"

    def inj(self, i, n):
        return tm.var_language(i, n, self.alphabet)

    def ident(self, n):
        return tm.identity(n, self.alphabet)

    def zero(self, p):
        return tm.zero(p, self.alphabet)

    def bot(self, n, p):
        return tm.bottom(n, p, self.alphabet)

    def base(self, assignment, p):
        return tm.base_morphism(assignment, p, self.alphabet)

    def comp(self, f, g):
        return tm.substitute(f, g)

    def tup(self, fs, p):
        return tm.tupling(fs, p, self.alphabet)

    def pair(self, f, g):
        return tm.pairing(f, g)

    def sum(self, f, g):
        return tm.separated_sum(f, g)

    def join(self, f, g):
        return tm.union(f, g)

    def dagger(self, f):
        return tm.dagger_tree(f)

    def star(self, f):
        return tm.star_tree(f)

    def resid(self, h, g):
        return tm.residual_tree(h, g)

    def sort(self, f):
        return f.sort

    def equal(self, f, g) -> bool:
        return tm.equivalent(f, g)

    def leq(self, f, g) -> bool:
        return tm.included(f, g)

    def homset(self, n, p):
        return None

    def sample(self, n, p, rng):
        return tm.random_tree_morphism(self.alphabet, n, p, rng, max_states=self.max_states)

    def atoms(self, sig):
        """The default interpretation: each symbol letter is its atom."""
        return {name: tm.atom(name, self.alphabet) for name in sig.letters
                if name in self.alphabet and sig.sort(name) == (1, self.alphabet.rank(name))}

    def witness(self, lhs, rhs, relation: str) -> str:
        if relation == "=":
            found = tm.separating_tree(lhs, rhs)
        else:
            found = None
            for k, (a, b) in enumerate(zip(lhs.components, rhs.components)):
                t = na.shortest_tree(na.difference(a, b))
                if t is not None:
                    found = (k, t, "left")
                    break
        if found is None:
            return "no separating tree"
        k, t, side = found
        return f"component {k + 1}: {tree_str(t)} only on the {side}"

    def show(self, f) -> str:
        return f.describe()


def check_value_sort(backend, value, sort, what: str) -> None:
    if backend.sort(value) != tuple(sort):
        s = backend.sort(value)
        raise SortError(f"{what} has sort {s[0]}->{s[1]}, expected {sort[0]}->{sort[1]}")
