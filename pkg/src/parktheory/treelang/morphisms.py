"""The theory ``Reg_Sigma``: tuples of regular tree languages under OI-substitution.

A morphism ``n -> p`` is an n-tuple of automata over ``X_p``. Composition is
OI-substitution (each occurrence of ``x_i`` is replaced independently by some
tree of the i-th language), ``|`` is componentwise union, and the least
morphism is the tuple of empty languages.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import SortError
from . import nfta as na
from .nfta import Nfta
from .trees import RankedAlphabet, Tree


@dataclass(frozen=True)
class TreeMorphism:
    alphabet: RankedAlphabet
    source: int
    target: int
    components: tuple[Nfta, ...]

    def __post_init__(self):
        if len(self.components) != self.source:
            raise SortError(f"{len(self.components)} components for a morphism from {self.source}")
        for c in self.components:
            if c.var_count != self.target or c.alphabet != self.alphabet:
                raise SortError(f"component over X_{c.var_count} in a morphism to {self.target}")

    @property
    def sort(self) -> tuple[int, int]:
        return (self.source, self.target)

    def __getitem__(self, i: int) -> Nfta:
        return self.components[i]

    def accepts(self, i: int, t: Tree) -> bool:
        """Membership of ``t`` in the ``i``-th language (0-based)."""
        return self.components[i].accepts(t)

    def describe(self) -> str:
        blocks = [f"tree morphism {self.source} -> {self.target}"]
        for k, c in enumerate(self.components, start=1):
            blocks.append(f"component {k}:\n" + na.trim(c).describe())
        return "\n".join(blocks)


def _morph(alphabet, n, p, comps) -> TreeMorphism:
    return TreeMorphism(alphabet, n, p, tuple(comps))


def _same(f: TreeMorphism, g: TreeMorphism) -> RankedAlphabet:
    if f.alphabet != g.alphabet:
        raise SortError("tree morphisms over different alphabets")
    return f.alphabet


# -- constants ----------------------------------------------------------------


def atom(sigma: str, alphabet: RankedAlphabet) -> TreeMorphism:
    """``{sigma(x_1, ..., x_p)} : 1 -> p`` for a symbol of rank ``p``."""
    p = alphabet.rank(sigma)
    rules = [(sigma, tuple(range(p)), p)]
    var_rules = [(i + 1, i) for i in range(p)]
    a = Nfta.build(alphabet, p, p + 1, rules, var_rules, [p])
    return _morph(alphabet, 1, p, [a])


def var_language(i: int, p: int, alphabet: RankedAlphabet) -> TreeMorphism:
    """``{x_i} : 1 -> p``, the injection ``i_p``."""
    if not 1 <= i <= p:
        raise SortError(f"variable index {i} outside [1, {p}]")
    return _morph(alphabet, 1, p, [Nfta.build(alphabet, p, 1, (), [(i, 0)], [0])])


def language(trees: Sequence[Tree], p: int, alphabet: RankedAlphabet) -> TreeMorphism:
    """A finite language viewed as a morphism ``1 -> p``."""
    return _morph(alphabet, 1, p, [na.from_trees(trees, alphabet, p)])


def identity(n: int, alphabet: RankedAlphabet) -> TreeMorphism:
    return tupling([var_language(i, n, alphabet) for i in range(1, n + 1)], n, alphabet)


def zero(p: int, alphabet: RankedAlphabet) -> TreeMorphism:
    return _morph(alphabet, 0, p, [])


def bottom(n: int, p: int, alphabet: RankedAlphabet) -> TreeMorphism:
    return _morph(alphabet, n, p, [na.empty(alphabet, p)] * n)


def top(n: int, p: int, alphabet: RankedAlphabet) -> TreeMorphism:
    return _morph(alphabet, n, p, [na.universal(alphabet, p)] * n)


def base_morphism(assignment: Sequence[int], p: int, alphabet: RankedAlphabet) -> TreeMorphism:
    return tupling([var_language(i, p, alphabet) for i in assignment], p, alphabet)


def injection(i: int, n: int, alphabet: RankedAlphabet) -> TreeMorphism:
    return var_language(i, n, alphabet)


# -- tupling and sums ------------------------------------------------------------


def tupling(fs: Sequence[TreeMorphism], p: int, alphabet: RankedAlphabet) -> TreeMorphism:
    comps = []
    for f in fs:
        if f.source != 1 or f.target != p:
            raise SortError(f"tupling component {f.source}->{f.target} is not 1->{p}")
        if f.alphabet != alphabet:
            raise SortError("tree morphisms over different alphabets")
        comps.extend(f.components)
    return _morph(alphabet, len(comps), p, comps)


def pairing(f: TreeMorphism, g: TreeMorphism) -> TreeMorphism:
    alphabet = _same(f, g)
    if f.target != g.target:
        raise SortError(f"pairing needs equal targets, got {f.target} and {g.target}")
    return _morph(alphabet, f.source + g.source, f.target, f.components + g.components)


def separated_sum(f: TreeMorphism, g: TreeMorphism) -> TreeMorphism:
    """``f (+) g``: ``f``'s languages over ``x_1..x_p``, ``g``'s shifted to ``x_{p+1}..``."""
    alphabet = _same(f, g)
    p, q = f.target, g.target
    left = [na.rename_vars(c, lambda i: i, p + q) for c in f.components]
    right = [na.rename_vars(c, lambda i: i + p, p + q) for c in g.components]
    return _morph(alphabet, f.source + g.source, p + q, left + right)


# -- order -------------------------------------------------------------------


def union(f: TreeMorphism, g: TreeMorphism) -> TreeMorphism:
    alphabet = _same(f, g)
    if f.sort != g.sort:
        raise SortError(f"union of {f.source}->{f.target} and {g.source}->{g.target}")
    return _morph(alphabet, f.source, f.target,
                  [na.union(a, b) for a, b in zip(f.components, g.components)])


def included(f: TreeMorphism, g: TreeMorphism) -> bool:
    _same(f, g)
    if f.sort != g.sort:
        raise SortError(f"cannot compare {f.source}->{f.target} with {g.source}->{g.target}")
    return all(na.included(a, b) for a, b in zip(f.components, g.components))


def equivalent(f: TreeMorphism, g: TreeMorphism) -> bool:
    return included(f, g) and included(g, f)


def separating_tree(f: TreeMorphism, g: TreeMorphism):
    """``(component index, tree, side)`` of a minimal difference, or ``None``."""
    _same(f, g)
    if f.sort != g.sort:
        raise SortError(f"cannot compare {f.source}->{f.target} with {g.source}->{g.target}")
    for k, (a, b) in enumerate(zip(f.components, g.components)):
        found = na.separating_tree(a, b)
        if found is not None:
            return (k, *found)
    return None


def trimmed(f: TreeMorphism) -> TreeMorphism:
    return _morph(f.alphabet, f.source, f.target, [na.trim(c) for c in f.components])


# -- substitution ----------------------------------------------------------------


def _substitute_one(a: Nfta, g: TreeMorphism) -> Nfta:
    """OI-substitute ``g``'s languages into one automaton over ``X_p``."""
    used = sorted({i for i, _ in a.var_rules})
    offset = a.num_states
    rules = set(a.rules)
    var_rules = set()
    eps: dict[int, set[int]] = {}
    for i in used:
        copy = g.components[i - 1]
        rules |= {(s, tuple(c + offset for c in k), q + offset) for s, k, q in copy.rules}
        var_rules |= {(j, q + offset) for j, q in copy.var_rules}
        for _, q in (r for r in a.var_rules if r[0] == i):
            for fq in copy.finals:
                eps.setdefault(fq + offset, set()).add(q)
        offset += copy.num_states
    out = na.eliminate_epsilon(a.alphabet, g.target, offset, rules, var_rules, a.finals, eps)
    return na.trim(out)


def substitute(f: TreeMorphism, g: TreeMorphism) -> TreeMorphism:
    """Composition ``f . g`` by OI-substitution.

    Each leaf rule ``x_i -> q`` of a component of ``f`` is replaced by a copy of
    ``g_i`` whose final states are linked to ``q``; the links are then
    eliminated. One copy per variable suffices because the run is
    nondeterministic, so distinct occurrences pick substitutes independently.
    """
    alphabet = _same(f, g)
    if f.target != g.source:
        raise SortError(f"cannot compose {f.source}->{f.target} with {g.source}->{g.target}: "
                        f"target {f.target} ≠ source {g.source}")
    return _morph(alphabet, f.source, g.target, [_substitute_one(c, g) for c in f.components])


# -- iteration -------------------------------------------------------------------


def _scalar_dagger(a: Nfta) -> Nfta:
    """``{L}^dagger`` for ``L`` over ``X_{1+p}``: graft ``L`` into its own ``x_1`` leaves."""
    eps: dict[int, set[int]] = {}
    for i, q in a.var_rules:
        if i == 1:
            for fq in a.finals:
                eps.setdefault(fq, set()).add(q)
    var_rules = {(i - 1, q) for i, q in a.var_rules if i > 1}
    out = na.eliminate_epsilon(a.alphabet, a.var_count - 1, a.num_states, a.rules,
                               var_rules, a.finals, eps)
    return na.trim(out)


def _split(f: TreeMorphism, what: str) -> tuple[int, int]:
    if f.target < f.source:
        raise SortError(f"{what} needs n -> n + p, got {f.source}->{f.target}")
    return f.source, f.target - f.source


def dagger_tree(f: TreeMorphism) -> TreeMorphism:
    """Least solution ``f^dagger : n -> p`` of ``X = f . <X, 1_p>``.

    Scalar case by grafting; vectors by the Bekic split on the first
    component: with ``f = <f1, g>``, ``h = g . <f1^dagger, 1_{m+p}>`` and
    ``f^dagger = <f1^dagger . <h^dagger, 1_p>, h^dagger>``.
    """
    n, p = _split(f, "dagger")
    alphabet = f.alphabet
    if n == 0:
        return zero(p, alphabet)
    f1_dag = _morph(alphabet, 1, f.target - 1, [_scalar_dagger(f.components[0])])
    if n == 1:
        return f1_dag
    m = n - 1
    rest = _morph(alphabet, m, f.target, f.components[1:])
    h = substitute(rest, pairing(f1_dag, identity(m + p, alphabet)))
    h_dag = dagger_tree(h)
    head = substitute(f1_dag, pairing(h_dag, identity(p, alphabet)))
    return pairing(head, h_dag)


def tau_tree(f: TreeMorphism) -> TreeMorphism:
    """``f^tau = f . (1_n (+) 0_n (+) 1_p) | (0_n (+) 1_n (+) 0_p)``."""
    n, p = _split(f, "tau")
    alphabet = f.alphabet
    I = lambda k: identity(k, alphabet)
    Z = lambda k: zero(k, alphabet)
    keep = separated_sum(separated_sum(I(n), Z(n)), I(p))
    inject = separated_sum(separated_sum(Z(n), I(n)), Z(p))
    return union(substitute(f, keep), inject)


def star_tree(f: TreeMorphism) -> TreeMorphism:
    """``f^* = (f^tau)^dagger : n -> n + p``."""
    return dagger_tree(tau_tree(f))


# -- quotient and residuation ------------------------------------------------------


def _reachable_states(lang: Nfta, k: Nfta) -> set[int]:
    """States of ``lang`` reached by some tree accepted by ``k`` (both over ``X_q``)."""
    prod = na.product(lang, k, lambda x, y: False)
    nb = k.num_states
    return {pq // nb for pq in na.productive(prod) if pq % nb in k.finals}


def quotient(L: TreeMorphism, K: TreeMorphism) -> TreeMorphism:
    """``L / K = {t in T_Sigma(X_p) : ({t} . K) meets L}`` for ``L : 1 -> q``, ``K : p -> q``."""
    alphabet = _same(L, K)
    if L.source != 1:
        raise SortError(f"quotient needs L : 1 -> q, got {L.source}->{L.target}")
    if L.target != K.target:
        raise SortError(f"quotient needs equal targets, got {L.target} and {K.target}")
    a = L.components[0]
    var_rules = set()
    for i, ki in enumerate(K.components, start=1):
        var_rules |= {(i, q) for q in _reachable_states(a, ki)}
    out = Nfta.build(alphabet, K.source, a.num_states, a.rules, var_rules, a.finals)
    return _morph(alphabet, 1, K.source, [na.trim(out)])


def residual_tree(L: TreeMorphism, K: TreeMorphism) -> TreeMorphism:
    """``L <= K``: componentwise the greatest ``M`` with ``M . K`` inside ``L``.

    Computed as the complement of ``complement(L_j) / K``: a tree is in the
    residual iff none of its K-instances falls outside ``L_j``.
    """
    alphabet = _same(L, K)
    if L.target != K.target:
        raise SortError(f"residual needs equal targets, got {L.target} and {K.target}")
    comps = []
    for a in L.components:
        outside = _morph(alphabet, 1, L.target, [na.complement(a)])
        comps.append(na.trim(na.complement(quotient(outside, K).components[0])))
    return _morph(alphabet, L.source, K.source, comps)


def residual_tree_literal(L: TreeMorphism, K: TreeMorphism) -> TreeMorphism:
    """The operator ``complement(L / complement(K))``, kept for comparison.

    Unlike :func:`residual_tree` this does not satisfy the Galois property in
    general; see the tests for a witness.
    """
    alphabet = _same(L, K)
    co_k = _morph(alphabet, K.source, K.target, [na.complement(c) for c in K.components])
    comps = []
    for a in L.components:
        q = quotient(_morph(alphabet, 1, L.target, [a]), co_k)
        comps.append(na.trim(na.complement(q.components[0])))
    return _morph(alphabet, L.source, K.source, comps)


# -- strict and distributive morphisms --------------------------------------------


def occurrence_counter(alphabet: RankedAlphabet, p: int) -> Nfta:
    """Deterministic automaton whose state counts each ``x_i`` saturating at 2.

    State ``c`` encodes the count vector in base 3; the final state is the
    all-ones vector.
    """
    import itertools

    vectors = list(itertools.product(range(3), repeat=p))
    code = {v: k for k, v in enumerate(vectors)}
    zero_v = (0,) * p
    rules = set()
    for sym, r in alphabet.symbols:
        for kids in itertools.product(vectors, repeat=r):
            total = tuple(min(2, sum(col)) for col in zip(*kids)) if r else zero_v
            rules.add((sym, tuple(code[k] for k in kids), code[total]))
    var_rules = {(i, code[tuple(1 if j == i - 1 else 0 for j in range(p))])
                 for i in range(1, p + 1)}
    return Nfta.build(alphabet, p, len(vectors), rules, var_rules, [code[(1,) * p]])


def check_strict_distributive(f: TreeMorphism) -> bool:
    """True iff every tree of ``f : 1 -> p`` uses each ``x_i`` exactly once."""
    if f.source != 1:
        raise SortError(f"strictness is defined for morphisms 1 -> p, got {f.source}->{f.target}")
    counter = occurrence_counter(f.alphabet, f.target)
    bad = na.product(f.components[0], counter,
                     lambda x, y: x in f.components[0].finals and y not in counter.finals)
    return na.is_empty(bad)


def is_strict_by_equations(f: TreeMorphism) -> bool:
    """``f . <1_p, .., bot_{1,p} (at i), .., p_p> = bot_{1,p}`` for every ``i``."""
    p, alphabet = f.target, f.alphabet
    for i in range(1, p + 1):
        comps = [bottom(1, p, alphabet) if j == i else var_language(j, p, alphabet)
                 for j in range(1, p + 1)]
        if not equivalent(substitute(f, tupling(comps, p, alphabet)), bottom(1, p, alphabet)):
            return False
    return True


def is_distributive_by_equations(f: TreeMorphism) -> bool:
    """The distributivity equation of the definition, for every ``i``."""
    p, alphabet = f.target, f.alphabet
    x = lambda j: var_language(j, p + 1, alphabet)
    for i in range(1, p + 1):
        def subst(middle):
            comps = [x(j) for j in range(1, i)] + [middle] + [x(j + 1) for j in range(i + 1, p + 1)]
            return substitute(f, tupling(comps, p + 1, alphabet))
        lhs = subst(union(x(i), x(i + 1)))
        rhs = union(subst(x(i)), subst(x(i + 1)))
        if not equivalent(lhs, rhs):
            return False
    return True


def strict_distributive_by_equations(f: TreeMorphism) -> bool:
    return is_strict_by_equations(f) and is_distributive_by_equations(f)


# -- random instances -------------------------------------------------------------


def random_tree_morphism(alphabet: RankedAlphabet, n: int, p: int, rng,
                         max_states: int = 4, empty_rate: float = 0.1) -> TreeMorphism:
    """Random trim components; each is the empty language with probability ``empty_rate``."""
    comps = []
    for _ in range(n):
        if rng.random() < empty_rate:
            comps.append(na.empty(alphabet, p))
        else:
            comps.append(na.random_nfta(alphabet, p, rng, max_states=max_states))
    return _morph(alphabet, n, p, comps)
