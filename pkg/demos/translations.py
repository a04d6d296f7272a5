"""Moving a term between the dagger and star forms and checking nothing changed.

Run with ``python3 demos/translations.py``.
"""

import numpy as np

from parktheory.backends import LatticeModel, TreeModel
from parktheory.lattice import chain
from parktheory.terms import (Interpretation, evaluate, format_term, parse_signature,
                              parse_term, to_dagger_form, to_star_form)
from parktheory.treelang import RankedAlphabet
from parktheory.treelang import morphisms as tm

sig = parse_signature("letter f 1 2\nletter g 1 1\n")
text = "dagger(f) . g | dagger(f . pair(g . inj(1,2), inj(2,2)))"
t = parse_term(text, sig)
starred = to_star_form(t)
back = to_dagger_form(starred)
print("original :", format_term(t))
print("star form:", format_term(starred))
print("and back :", format_term(back))

model = LatticeModel(chain(3, "C3"))
rng = np.random.default_rng(4)
for trial in range(3):
    values = {x: model.sample(*sig.sort(x), rng) for x in sig.letters}
    interp = Interpretation(model, sig, values)
    a, b, c = (evaluate(u, interp) for u in (t, starred, back))
    print(f"C3 trial {trial}: {a.format_table()}  same in all forms: {a == b == c}")

# the same translation over tree languages, decided exactly
S = RankedAlphabet.of(("c", 0), ("s", 1), ("g", 2))
trees = TreeModel(S)
sig_t = parse_signature("symbol c 0\nsymbol s 1\nsymbol g 2\n")
u = parse_term("dagger(g | s . inj(2,2)) . c", sig_t)
interp = Interpretation(trees, sig_t, trees.atoms(sig_t))
print("tree term:", format_term(u))
print("equal to its round trip:",
      tm.equivalent(evaluate(u, interp), evaluate(to_dagger_form(to_star_form(u)), interp)))
