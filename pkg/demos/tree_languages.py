"""Regular tree languages as morphisms: iteration, equivalence and residuals.

Run with ``python3 demos/tree_languages.py``.
"""

from parktheory.treelang import RankedAlphabet, enumerate_trees, tree_str
from parktheory.treelang import morphisms as tm

S = RankedAlphabet.of(("c", 0), ("s", 1), ("g", 2))


def show(f, p, bound, label):
    trees = [t for t in enumerate_trees(S, p, bound) if f.accepts(0, t)]
    print(f"{label}: {', '.join(map(tree_str, trees))}")


# x1 := s(x1) | c, solved for x1: all s^k(c)
f = tm.union(tm.language([("s", 1)], 1, S), tm.language([("c",)], 1, S))
show(tm.dagger_tree(f), 0, 5, "dagger of s(x1) | c, depth <= 5")

# star keeps the variable: s^k(x1)
show(tm.star_tree(tm.atom("s", S)), 1, 4, "star of s, depth <= 4")

# two descriptions of the same language and one that differs
one = tm.star_tree(tm.atom("s", S))
two = tm.union(tm.identity(1, S), tm.substitute(tm.atom("s", S), one))
print("star(s) = id | s . star(s):", tm.equivalent(one, two))
k, tree, side = tm.separating_tree(one, tm.atom("s", S))
print(f"star(s) vs s differ at component {k + 1} on {tree_str(tree)} ({side} side)")

# the residual undoes substitution: the largest M with M . K inside L
L = tm.language([("s", ("c",)), ("g", ("c",), ("c",))], 0, S)
K = tm.language([("c",)], 0, S)
r = tm.residual_tree(L, K)
show(r, 1, 3, "residual of {s(c), g(c,c)} by x1 := c, depth <= 3")
print("substituting back stays inside L:", tm.included(tm.substitute(r, K), L))

# a tree with two copies of x1 is not linear, so the morphism is not distributive
gxx = tm.substitute(tm.atom("g", S), tm.tupling([tm.var_language(1, 1, S)] * 2, 1, S))
print("g is strict and distributive:", tm.check_strict_distributive(tm.atom("g", S)))
print("g(x1,x1) is strict and distributive:", tm.check_strict_distributive(gxx))
