"""Fixed points and residuals of monotone maps on the diamond lattice.

Run with ``python3 demos/monotone_maps.py``.
"""

from pathlib import Path

from parktheory import montheory as mt
from parktheory.axioms import FALSE_DEMO, check_schema, lookup
from parktheory.backends import LatticeModel
from parktheory.lattice import load_lattice

M = load_lattice(Path(__file__).parent / "data" / "diamond.lat")
print(f"lattice {M.name}: elements {', '.join(M.elements)}")

# f(x, y) = x | y as a map 1 -> 1 + 1; its dagger solves x = x | y for the least x
join = mt.Morphism.from_function(M, 1, 2, lambda x, y: M.elements[M.join_table[M.code(x),
                                                                               M.code(y)]])
print("dagger of x|y :", mt.dagger(join).format_table())

# swapping the atoms is monotone; f(x, y) = swap(x) | y climbs from y until closed
def swap_or(x, y):
    swapped = {"a": "b", "b": "a"}.get(x, x)
    return M.elements[M.join_table[M.code(swapped), M.code(y)]]


f = mt.Morphism.from_function(M, 1, 2, swap_or)
print("approximants of swap(x) | y, from bottom:")
for k, step in zip(range(4), mt.kleene_approximants(f)):
    print(f"  step {k}: {step.format_table()}")
print("dagger:", mt.dagger(f).format_table())

# the star keeps the starting point as an extra argument
swap = mt.Morphism.from_function(M, 1, 2, lambda x, y: {"a": "b", "b": "a"}.get(x, x))
print("star of the swap at (start, y):", mt.star(swap).format_table())

# residuals are the greatest solutions of f . g <= h
g = mt.Morphism.from_function(M, 1, 1, lambda x: "a" if x in ("a", "1") else "0")
h = mt.identity(1, M)
r = mt.residual(h, g)
print("residual id <= g   :", r.format_table())
print("r . g <= id        :", mt.compose(r, g) <= h)

model = LatticeModel(M)
for sid in ("EQ12", "EQ18", "EQ26"):
    print(check_schema(lookup(sid), model, samples=300, seed=1, max_arity=1).summary())

report = check_schema(FALSE_DEMO, model)
print(report.counterexample.describe(model))
